#include "trustmesh/types.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <variant>

#include "trustmesh/errors.hpp"

namespace trustmesh {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

std::string to_string(AssetType type) {
    switch (type) {
        case AssetType::Ran: return "ran";
        case AssetType::Spectrum: return "spectrum";
        case AssetType::Vnf: return "vnf";
        case AssetType::Cnf: return "cnf";
        case AssetType::Slice: return "slice";
        case AssetType::NetworkService: return "network_service";
        case AssetType::Cloud: return "cloud";
        case AssetType::Edge: return "edge";
    }
    throw ValidationError("asset_type: value out of enumeration");
}

AssetType parse_asset_type(const std::string& text) {
    const std::string t = lower(text);
    for (AssetType a : kAllAssetTypes)
        if (t == to_string(a)) return a;
    throw ValidationError("asset_type: unknown value '" + text + "'");
}

void validate(const ProductOffer& offer) {
    if (offer.offer_id.empty()) throw ValidationError("ProductOffer: offer_id is empty");
    if (offer.provider_id.empty())
        throw ValidationError("ProductOffer " + offer.offer_id + ": provider_id is empty");
    if (offer.price < 0.0)
        throw ValidationError("ProductOffer " + offer.offer_id + ": price must be >= 0");
    if (offer.withdrawn_at && *offer.withdrawn_at < offer.published_at)
        throw ValidationError("ProductOffer " + offer.offer_id +
                              ": withdrawn_at precedes published_at");
}

bool offer_live_at(const ProductOffer& offer, double as_of) {
    if (offer.published_at > as_of) return false;
    return !offer.withdrawn_at || *offer.withdrawn_at > as_of;
}

void validate(const InteractionRecord& record) {
    if (record.trustor_id.empty() || record.trustee_id.empty())
        throw ValidationError("InteractionRecord: empty party identifier");
    if (record.trustor_id == record.trustee_id)
        throw ValidationError("InteractionRecord: trustor equals trustee (" +
                              record.trustor_id + ")");
    if (record.interaction_count < 1)
        throw ValidationError("InteractionRecord: interaction_count must be >= 1");
    if (!in_unit(record.satisfaction))
        throw ValidationError("InteractionRecord: satisfaction outside [0,1]");
}

std::string to_string(LogKind kind) {
    switch (kind) {
        case LogKind::Conn: return "conn";
        case LogKind::Notice: return "notice";
        case LogKind::Weird: return "weird";
        case LogKind::Stats: return "stats";
    }
    throw ValidationError("log_kind: value out of enumeration");
}

bool is_known_conn_state(const std::string& state) {
    static const std::set<std::string> kStates = {
        "S0", "S1", "S2", "S3", "SF", "REJ", "RSTO", "RSTR",
        "RSTOS0", "RSTRH", "SH", "SHR", "OTH"};
    return kStates.count(state) > 0;
}

void validate(const SecurityLogRecord& record) {
    if (record.timestamp < 0.0)
        throw ValidationError("SecurityLogRecord: negative timestamp");
    switch (record.kind) {
        case LogKind::Conn: {
            const auto* p = std::get_if<ConnPayload>(&record.payload);
            if (!p) throw ValidationError("SecurityLogRecord: conn record without conn payload");
            if (!is_known_conn_state(p->conn_state) && p->conn_state != "UNKNOWN")
                throw ValidationError("SecurityLogRecord: unrecognized conn_state '" +
                                      p->conn_state + "'");
            break;
        }
        case LogKind::Notice: {
            const auto* p = std::get_if<NoticePayload>(&record.payload);
            if (!p) throw ValidationError("SecurityLogRecord: notice record without notice payload");
            if (!in_unit(p->severity_weight))
                throw ValidationError("SecurityLogRecord: severity weight outside [0,1]");
            break;
        }
        case LogKind::Weird:
            if (!std::holds_alternative<WeirdPayload>(record.payload))
                throw ValidationError("SecurityLogRecord: weird record without weird payload");
            break;
        case LogKind::Stats: {
            const auto* p = std::get_if<StatsPayload>(&record.payload);
            if (!p) throw ValidationError("SecurityLogRecord: stats record without stats payload");
            if (p->packets_received < 0 || p->packets_dropped < 0)
                throw ValidationError("SecurityLogRecord: negative packet count");
            if (p->packets_dropped > p->packets_received)
                throw ValidationError("SecurityLogRecord: packets_dropped exceeds packets_received");
            break;
        }
    }
}

std::string to_string(SlaEventKind kind) {
    switch (kind) {
        case SlaEventKind::Violation: return "violation";
        case SlaEventKind::Warning: return "warning";
    }
    throw ValidationError("sla_event_kind: value out of enumeration");
}

SlaEventKind parse_sla_event_kind(const std::string& text) {
    const std::string t = lower(text);
    if (t == "violation") return SlaEventKind::Violation;
    if (t == "warning") return SlaEventKind::Warning;
    throw ValidationError("sla_event_kind: unknown value '" + text + "'");
}

void validate(const SlaEvent& event) {
    if (event.provider_id.empty()) throw ValidationError("SlaEvent: provider_id is empty");
    if (event.timestamp < 0.0) throw ValidationError("SlaEvent: negative timestamp");
}

void validate(const FeedbackRecord& record) {
    if (record.source_id.empty() || record.target_id.empty())
        throw ValidationError("FeedbackRecord: empty party identifier");
    if (record.source_id == record.target_id)
        throw ValidationError("FeedbackRecord: source equals target (" + record.source_id + ")");
    if (!in_unit(record.satisfaction))
        throw ValidationError("FeedbackRecord: satisfaction outside [0,1]");
    if (record.window_index < 0)
        throw ValidationError("FeedbackRecord: negative window_index");
}

void validate(const Recommendation& rec) {
    if (rec.recommender_id.empty() || rec.target_id.empty())
        throw ValidationError("Recommendation: empty party identifier");
    if (!in_unit(rec.value)) throw ValidationError("Recommendation: value outside [0,1]");
}

void validate(const RecommenderLedgerEntry& entry) {
    if (entry.recommender_id.empty())
        throw ValidationError("RecommenderLedgerEntry: recommender_id is empty");
    if (!in_unit(entry.last_trust))
        throw ValidationError("RecommenderLedgerEntry: last_trust outside [0,1]");
    if (!in_unit(entry.recommendation_trust))
        throw ValidationError("RecommenderLedgerEntry: recommendation_trust outside [0,1]");
}

void validate(const TrustState& state) {
    if (state.trustor_id.empty() || state.trustee_id.empty())
        throw ValidationError("TrustState: empty party identifier");
    if (!in_unit(state.score)) throw ValidationError("TrustState: score outside [0,1]");
    if (!in_unit(state.direct_component))
        throw ValidationError("TrustState: direct_component outside [0,1]");
    if (!in_unit(state.community_component))
        throw ValidationError("TrustState: community_component outside [0,1]");
    if (state.evidence_interactions < 0)
        throw ValidationError("TrustState: negative evidence_interactions");
    if (state.provisional && state.evidence_interactions != 0)
        throw ValidationError("TrustState: provisional score with recorded evidence");
}

}  // namespace trustmesh
