#include "trustmesh/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "trustmesh/serde.hpp"

namespace trustmesh {

namespace {

bool blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

template <typename T>
ParseOutcome<T> parse_lines(std::istream& in,
                            const std::function<T(std::string_view)>& parse_one) {
    if (in.fail()) throw FormatError("input stream is not readable");
    ParseOutcome<T> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (blank(line)) continue;
        try {
            out.records.push_back(parse_one(line));
        } catch (const Error& e) {
            out.errors.push_back({line_no, e.what()});
        }
    }
    return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

bool unset(std::string_view v) { return v == "-"; }

std::string field_text(std::string_view v) {
    return v == "(empty)" ? std::string() : std::string(v);
}

double parse_ts(std::string_view v) {
    if (unset(v)) throw FormatError("ts is unset");
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw FormatError("ts is not a number: '" + std::string(v) + "'");
    return out;
}

std::int64_t parse_count(std::string_view v, const char* name) {
    if (unset(v)) return 0;
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw FormatError(std::string(name) + " is not a count: '" + std::string(v) + "'");
    return out;
}

StakeholderId map_address(std::string_view address, const AddressMap& address_map) {
    if (unset(address)) return kUnknownStakeholder;
    auto it = address_map.find(std::string(address));
    return it == address_map.end() ? kUnknownStakeholder : it->second;
}

const std::vector<std::string>& required_fields(LogKind kind) {
    static const std::vector<std::string> conn = {"ts", "id.orig_h", "id.resp_h",
                                                  "conn_state"};
    static const std::vector<std::string> notice = {"ts", "src", "note"};
    static const std::vector<std::string> weird = {"ts", "id.orig_h", "name"};
    static const std::vector<std::string> stats = {"ts", "pkts_proc", "pkts_dropped"};
    switch (kind) {
        case LogKind::Conn: return conn;
        case LogKind::Notice: return notice;
        case LogKind::Weird: return weird;
        case LogKind::Stats: return stats;
    }
    throw FormatError("unknown log kind");
}

}  // namespace

ParseOutcome<ProductOffer> parse_catalog(std::istream& in) {
    return parse_lines<ProductOffer>(in, [](std::string_view l) { return parse_offer_line(l); });
}

ParseOutcome<InteractionRecord> parse_interactions(std::istream& in) {
    return parse_lines<InteractionRecord>(
        in, [](std::string_view l) { return parse_interaction_line(l); });
}

ParseOutcome<Recommendation> parse_recommendations(std::istream& in) {
    return parse_lines<Recommendation>(
        in, [](std::string_view l) { return parse_recommendation_line(l); });
}

ParseOutcome<SlaEvent> ingest_sla_events(std::istream& in) {
    ParseOutcome<SlaEvent> out =
        parse_lines<SlaEvent>(in, [](std::string_view l) { return parse_sla_event_line(l); });
    std::stable_sort(out.records.begin(), out.records.end(),
                     [](const SlaEvent& a, const SlaEvent& b) {
                         return a.timestamp < b.timestamp;
                     });
    return out;
}

std::map<StakeholderId, std::int64_t> sla_counts_by_provider(
    const std::vector<SlaEvent>& events) {
    std::map<StakeholderId, std::int64_t> counts;
    for (const SlaEvent& event : events) ++counts[event.provider_id];
    return counts;
}

ParseOutcome<SecurityLogRecord> parse_zeek_log(std::istream& in, LogKind kind,
                                               const AddressMap& address_map,
                                               const SeverityMap& severities) {
    if (in.fail()) throw FormatError("input stream is not readable");
    ParseOutcome<SecurityLogRecord> out;
    std::map<std::string, std::size_t> columns;
    bool have_fields = false;
    std::string line;
    std::size_t line_no = 0;

    auto column = [&](const std::vector<std::string_view>& fields,
                      const std::string& name) -> std::string_view {
        auto it = columns.find(name);
        if (it == columns.end() || it->second >= fields.size())
            throw FormatError("field '" + name + "' missing from line");
        return fields[it->second];
    };
    auto optional_column = [&](const std::vector<std::string_view>& fields,
                               const std::string& name) -> std::string_view {
        auto it = columns.find(name);
        if (it == columns.end() || it->second >= fields.size()) return "-";
        return fields[it->second];
    };

    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::vector<std::string_view> parts = split_tabs(line);
            if (parts[0] == "#fields") {
                columns.clear();
                for (std::size_t i = 1; i < parts.size(); ++i)
                    columns[std::string(parts[i])] = i - 1;
                std::string missing;
                for (const std::string& name : required_fields(kind)) {
                    if (!columns.count(name)) {
                        if (!missing.empty()) missing += ", ";
                        missing += name;
                    }
                }
                if (!missing.empty())
                    throw FormatError(to_string(kind) +
                                      " log is missing required fields: " + missing);
                have_fields = true;
            }
            continue;
        }
        if (!have_fields)
            throw FormatError("no #fields header before the first value line");

        std::vector<std::string_view> fields = split_tabs(line);
        try {
            if (fields.size() != columns.size())
                throw FormatError("expected " + std::to_string(columns.size()) +
                                  " fields, got " + std::to_string(fields.size()));
            SecurityLogRecord record;
            record.kind = kind;
            record.timestamp = parse_ts(column(fields, "ts"));
            switch (kind) {
                case LogKind::Conn: {
                    record.originator_id =
                        map_address(column(fields, "id.orig_h"), address_map);
                    record.responder_id =
                        map_address(column(fields, "id.resp_h"), address_map);
                    ConnPayload payload;
                    std::string state = field_text(column(fields, "conn_state"));
                    payload.conn_state = is_known_conn_state(state) ? state : "UNKNOWN";
                    payload.orig_bytes =
                        parse_count(optional_column(fields, "orig_bytes"), "orig_bytes");
                    payload.resp_bytes =
                        parse_count(optional_column(fields, "resp_bytes"), "resp_bytes");
                    payload.orig_pkts =
                        parse_count(optional_column(fields, "orig_pkts"), "orig_pkts");
                    payload.resp_pkts =
                        parse_count(optional_column(fields, "resp_pkts"), "resp_pkts");
                    record.payload = std::move(payload);
                    break;
                }
                case LogKind::Notice: {
                    record.originator_id = map_address(column(fields, "src"), address_map);
                    record.responder_id =
                        map_address(optional_column(fields, "dst"), address_map);
                    NoticePayload payload;
                    payload.note = field_text(column(fields, "note"));
                    if (payload.note.empty()) throw FormatError("note is unset");
                    auto it = severities.find(payload.note);
                    payload.severity_weight = it == severities.end() ? 1.0 : it->second;
                    record.payload = std::move(payload);
                    break;
                }
                case LogKind::Weird: {
                    record.originator_id =
                        map_address(column(fields, "id.orig_h"), address_map);
                    record.responder_id =
                        map_address(optional_column(fields, "id.resp_h"), address_map);
                    WeirdPayload payload;
                    payload.name = field_text(column(fields, "name"));
                    if (payload.name.empty()) throw FormatError("name is unset");
                    record.payload = std::move(payload);
                    break;
                }
                case LogKind::Stats: {
                    StatsPayload payload;
                    payload.packets_received =
                        parse_count(column(fields, "pkts_proc"), "pkts_proc");
                    payload.packets_dropped =
                        parse_count(column(fields, "pkts_dropped"), "pkts_dropped");
                    record.payload = std::move(payload);
                    break;
                }
            }
            validate(record);
            out.records.push_back(std::move(record));
        } catch (const Error& e) {
            out.errors.push_back({line_no, e.what()});
        }
    }
    if (!have_fields) throw FormatError("no #fields header found");
    return out;
}

std::map<StakeholderId, CatalogFeatures> derive_catalog_features(
    const std::vector<ProductOffer>& offers, double as_of) {
    std::map<StakeholderId, CatalogFeatures> features;
    for (const ProductOffer& offer : offers) {
        if (offer.published_at > as_of) continue;
        CatalogFeatures& f = features[offer.provider_id];
        f.provider_id = offer.provider_id;
        f.as_of = as_of;
        if (offer_live_at(offer, as_of)) {
            ++f.offers_total;
            ++f.offers_by_type[offer.asset_type];
            ++f.offers_by_location[offer.location];
        } else {
            ++f.offers_withdrawn;
        }
    }
    return features;
}

}  // namespace trustmesh
