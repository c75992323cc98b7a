#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include "json.hpp"
#include "trustmesh/errors.hpp"

// Internal helpers for the line-delimited JSON formats. nlohmann::json keeps
// object keys sorted, so dump() is already canonical; doubles go through
// to_chars for the shortest round-trip form where we print numbers ourselves.

namespace trustmesh::detail {

using json = nlohmann::json;

inline std::string double_to_string(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

inline json parse_object(std::string_view line, const char* what) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw FormatError(std::string(what) + ": not valid JSON");
    if (!j.is_object()) throw FormatError(std::string(what) + ": expected a JSON object");
    return j;
}

/// Reject keys outside `allowed`; complain about the first offender.
inline void check_keys(const json& j, const std::set<std::string>& allowed,
                       const char* what) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw FormatError(std::string(what) + ": unknown field '" + it.key() + "'");
    }
}

inline const json& require(const json& j, const char* key, const char* what) {
    auto it = j.find(key);
    if (it == j.end())
        throw FormatError(std::string(what) + ": missing field '" + key + "'");
    return *it;
}

inline std::string get_string(const json& j, const char* key, const char* what) {
    const json& v = require(j, key, what);
    if (!v.is_string())
        throw FormatError(std::string(what) + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

inline double get_double(const json& j, const char* key, const char* what) {
    const json& v = require(j, key, what);
    if (!v.is_number())
        throw FormatError(std::string(what) + ": field '" + key + "' must be a number");
    return v.get<double>();
}

inline std::int64_t get_int(const json& j, const char* key, const char* what) {
    const json& v = require(j, key, what);
    if (!v.is_number_integer())
        throw FormatError(std::string(what) + ": field '" + key + "' must be an integer");
    return v.get<std::int64_t>();
}

inline bool get_bool(const json& j, const char* key, const char* what) {
    const json& v = require(j, key, what);
    if (!v.is_boolean())
        throw FormatError(std::string(what) + ": field '" + key + "' must be a boolean");
    return v.get<bool>();
}

inline std::optional<double> get_optional_double(const json& j, const char* key,
                                                 const char* what) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_number())
        throw FormatError(std::string(what) + ": field '" + key + "' must be a number");
    return it->get<double>();
}

}  // namespace trustmesh::detail
