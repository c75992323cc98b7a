#include "trustmesh/storage.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <tuple>

#include "json_util.hpp"
#include "trustmesh/serde.hpp"

namespace trustmesh {

namespace {

using detail::json;

constexpr const char* kPrivateSchema = "trustmesh-private-store";
constexpr const char* kLedgerSchema = "trustmesh-shared-ledger";
constexpr int kVersion = 1;

std::string header_line(const char* schema, const std::string& domain) {
    json j{{"kind", "header"}, {"schema", schema}, {"version", kVersion}};
    if (!domain.empty()) j["domain_id"] = domain;
    return j.dump();
}

std::string footer_line(std::size_t records) {
    return json{{"kind", "end"}, {"records", records}}.dump();
}

std::string wrap(const char* kind, const std::string& record_json) {
    return std::string("{\"kind\":\"") + kind + "\",\"record\":" + record_json + "}";
}

struct StoreReader {
    std::vector<std::string> lines;
    std::string schema;
    std::string domain;

    explicit StoreReader(const std::filesystem::path& path, const char* expected_schema) {
        std::ifstream in(path);
        if (!in) throw StorageError("cannot open " + path.string());
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) lines.push_back(line);
        }
        if (lines.empty()) throw StorageError(path.string() + ": empty file");

        json header = parse(1, lines.front());
        if (kind_of(1, header) != "header")
            throw StorageError(path.string() + ": line 1: missing header");
        if (!header.contains("schema") || !header["schema"].is_string() ||
            header["schema"].get<std::string>() != expected_schema)
            throw StorageError(path.string() + ": line 1: wrong schema");
        if (!header.contains("version") || !header["version"].is_number_integer() ||
            header["version"].get<int>() != kVersion)
            throw StorageError(path.string() + ": line 1: unsupported version");
        if (header.contains("domain_id")) domain = header["domain_id"].get<std::string>();

        json footer = parse(lines.size(), lines.back());
        if (kind_of(lines.size(), footer) != "end")
            throw StorageError(path.string() + ": truncated file, no end marker");
        const std::size_t expected = lines.size() - 2;
        if (!footer.contains("records") || !footer["records"].is_number_integer() ||
            footer["records"].get<std::size_t>() != expected)
            throw StorageError(path.string() + ": record count mismatch, file truncated");
    }

    json parse(std::size_t line_no, const std::string& line) const {
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw StorageError("line " + std::to_string(line_no) + ": not a JSON object");
        return j;
    }

    std::string kind_of(std::size_t line_no, const json& j) const {
        if (!j.contains("kind") || !j["kind"].is_string())
            throw StorageError("line " + std::to_string(line_no) + ": missing kind");
        return j["kind"].get<std::string>();
    }

    /// Visit the record lines (between header and footer).
    template <typename F>
    void each_record(F f) const {
        for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
            const std::size_t line_no = i + 1;
            json j = parse(line_no, lines[i]);
            const std::string kind = kind_of(line_no, j);
            if (!j.contains("record"))
                throw StorageError("line " + std::to_string(line_no) + ": missing record");
            try {
                f(kind, j["record"].dump());
            } catch (const Error& e) {
                throw StorageError("line " + std::to_string(line_no) + ": " + e.what());
            }
        }
    }
};

void atomic_write(const std::filesystem::path& path, const std::vector<std::string>& lines) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw StorageError("cannot write " + tmp.string());
        for (const std::string& line : lines) out << line << '\n';
        if (!out) throw StorageError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw StorageError("cannot move " + tmp.string() + " into place: " + ec.message());
}

}  // namespace

void SharedLedger::push_interaction(const InteractionRecord& record) {
    validate(record);
    interactions_.push_back(record);
}

void SharedLedger::push_recommendation(const Recommendation& record) {
    validate(record);
    recommendations_.push_back(record);
}

std::vector<InteractionRecord> SharedLedger::interactions_about(
    const StakeholderId& trustee) const {
    std::vector<InteractionRecord> out;
    for (const InteractionRecord& r : interactions_)
        if (r.trustee_id == trustee) out.push_back(r);
    std::stable_sort(out.begin(), out.end(),
                     [](const InteractionRecord& a, const InteractionRecord& b) {
                         return a.recorded_at < b.recorded_at;
                     });
    return out;
}

std::vector<StakeholderId> SharedLedger::find_recommenders(const StakeholderId& target,
                                                           const StakeholderId& exclude) const {
    // latest interaction per trustor; later append wins recorded_at ties
    std::map<StakeholderId, std::pair<double, std::size_t>> latest;
    for (std::size_t i = 0; i < interactions_.size(); ++i) {
        const InteractionRecord& r = interactions_[i];
        if (r.trustee_id != target || r.trustor_id == exclude || r.trustor_id == target)
            continue;
        auto [it, inserted] = latest.try_emplace(r.trustor_id, r.recorded_at, i);
        if (!inserted && r.recorded_at >= it->second.first) it->second = {r.recorded_at, i};
    }
    std::vector<std::pair<std::pair<double, std::size_t>, StakeholderId>> order;
    for (const auto& [id, key] : latest) order.emplace_back(key, id);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        return a.first > b.first;  // most recent first
    });
    std::vector<StakeholderId> out;
    out.reserve(order.size());
    for (const auto& [key, id] : order) out.push_back(id);
    return out;
}

std::vector<Recommendation> SharedLedger::recommendations_about(
    const StakeholderId& target) const {
    std::vector<Recommendation> out;
    for (const Recommendation& r : recommendations_)
        if (r.target_id == target) out.push_back(r);
    return out;
}

void PrivateStore::put_trust_state(const TrustState& state) {
    validate(state);
    if (state.trustor_id != domain_id)
        throw ValidationError("PrivateStore " + domain_id + ": trust state belongs to " +
                              state.trustor_id);
    trust_states[state.trustee_id] = state;
}

std::optional<TrustState> PrivateStore::get_trust_state(const StakeholderId& trustee) const {
    auto it = trust_states.find(trustee);
    if (it == trust_states.end()) return std::nullopt;
    return it->second;
}

void PrivateStore::put_ledger_entry(const RecommenderLedgerEntry& entry) {
    validate(entry);
    recommender_ledger[entry.recommender_id] = entry;
}

RecommenderLedgerEntry PrivateStore::ledger_entry_or_default(
    const StakeholderId& recommender) const {
    auto it = recommender_ledger.find(recommender);
    if (it != recommender_ledger.end()) return it->second;
    return RecommenderLedgerEntry{recommender, 0.5, 0.5};
}

void PrivateStore::append_feedback(const FeedbackRecord& record) {
    validate(record);
    feedback_log.push_back(record);
}

void save_private_store(const PrivateStore& store, const std::filesystem::path& path) {
    std::vector<std::string> lines;
    lines.push_back(header_line(kPrivateSchema, store.domain_id));
    for (const auto& [trustee, state] : store.trust_states)
        lines.push_back(wrap("trust_state", render_trust_state_line(state)));
    for (const auto& [id, entry] : store.recommender_ledger)
        lines.push_back(wrap("ledger_entry", render_ledger_entry_line(entry)));
    for (const FeedbackRecord& record : store.feedback_log)
        lines.push_back(wrap("feedback", render_feedback_line(record)));
    lines.push_back(footer_line(lines.size() - 1));
    atomic_write(path, lines);
}

PrivateStore load_private_store(const std::filesystem::path& path) {
    StoreReader reader(path, kPrivateSchema);
    PrivateStore store;
    store.domain_id = reader.domain;
    reader.each_record([&](const std::string& kind, const std::string& record) {
        if (kind == "trust_state") {
            TrustState state = parse_trust_state_line(record);
            store.trust_states[state.trustee_id] = state;
        } else if (kind == "ledger_entry") {
            RecommenderLedgerEntry entry = parse_ledger_entry_line(record);
            store.recommender_ledger[entry.recommender_id] = entry;
        } else if (kind == "feedback") {
            store.feedback_log.push_back(parse_feedback_line(record));
        } else {
            throw StorageError("unknown record kind '" + kind + "'");
        }
    });
    return store;
}

void save_shared_ledger(const SharedLedger& ledger, const std::filesystem::path& path) {
    std::vector<std::string> lines;
    lines.push_back(header_line(kLedgerSchema, ""));
    for (const InteractionRecord& record : ledger.interactions())
        lines.push_back(wrap("interaction", render_interaction_line(record)));
    for (const Recommendation& record : ledger.recommendations())
        lines.push_back(wrap("recommendation", render_recommendation_line(record)));
    lines.push_back(footer_line(lines.size() - 1));
    atomic_write(path, lines);
}

SharedLedger load_shared_ledger(const std::filesystem::path& path) {
    StoreReader reader(path, kLedgerSchema);
    SharedLedger ledger;
    reader.each_record([&](const std::string& kind, const std::string& record) {
        if (kind == "interaction") {
            ledger.push_interaction(parse_interaction_line(record));
        } else if (kind == "recommendation") {
            ledger.push_recommendation(parse_recommendation_line(record));
        } else {
            throw StorageError("unknown record kind '" + kind + "'");
        }
    });
    return ledger;
}

}  // namespace trustmesh
