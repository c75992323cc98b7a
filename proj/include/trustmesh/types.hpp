#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace trustmesh {

using StakeholderId = std::string;

/// Sentinel stakeholder for endpoints that no address mapping covers.
inline const StakeholderId kUnknownStakeholder = "UNKNOWN";

/// Marketplace asset categories. VNF and CNF are carried as distinct values
/// even where they are usually advertised as one combined category.
enum class AssetType {
    Ran,
    Spectrum,
    Vnf,
    Cnf,
    Slice,
    NetworkService,
    Cloud,
    Edge,
};

inline constexpr AssetType kAllAssetTypes[] = {
    AssetType::Ran,     AssetType::Spectrum,       AssetType::Vnf,
    AssetType::Cnf,     AssetType::Slice,          AssetType::NetworkService,
    AssetType::Cloud,   AssetType::Edge,
};

std::string to_string(AssetType type);

/// Case-insensitive; throws ValidationError naming the offending value.
AssetType parse_asset_type(const std::string& text);

/// A published marketplace offer.
struct ProductOffer {
    std::string offer_id;
    StakeholderId provider_id;
    AssetType asset_type = AssetType::Ran;
    std::string location;
    double price = 0.0;
    double published_at = 0.0;  // seconds since epoch
    std::optional<double> withdrawn_at;

    bool operator==(const ProductOffer&) const = default;
};

void validate(const ProductOffer& offer);

/// An offer is live at `as_of` once published and not yet withdrawn.
/// Withdrawal at exactly `as_of` counts as withdrawn.
bool offer_live_at(const ProductOffer& offer, double as_of);

/// Per-provider statistics derived from the offer catalog.
struct CatalogFeatures {
    StakeholderId provider_id;
    std::int64_t offers_total = 0;  // live offers only
    std::map<AssetType, std::int64_t> offers_by_type;
    std::map<std::string, std::int64_t> offers_by_location;
    std::int64_t offers_withdrawn = 0;
    double as_of = 0.0;

    bool operator==(const CatalogFeatures&) const = default;
};

/// A completed trustor/trustee transaction as published to the shared ledger.
struct InteractionRecord {
    StakeholderId trustor_id;
    StakeholderId trustee_id;
    std::string offer_id;
    AssetType asset_type = AssetType::Ran;
    double start_date = 0.0;
    std::int64_t interaction_count = 1;
    double satisfaction = 0.0;  // in [0,1]
    double recorded_at = 0.0;

    bool operator==(const InteractionRecord&) const = default;
};

void validate(const InteractionRecord& record);

enum class LogKind { Conn, Notice, Weird, Stats };

std::string to_string(LogKind kind);

/// Connection states recognized from monitoring logs; anything else is
/// normalized to "UNKNOWN".
bool is_known_conn_state(const std::string& state);

struct ConnPayload {
    std::string conn_state;  // recognized code or "UNKNOWN"
    std::int64_t orig_bytes = 0;
    std::int64_t resp_bytes = 0;
    std::int64_t orig_pkts = 0;
    std::int64_t resp_pkts = 0;

    bool operator==(const ConnPayload&) const = default;
};

struct NoticePayload {
    std::string note;
    double severity_weight = 1.0;  // in [0,1], from configuration

    bool operator==(const NoticePayload&) const = default;
};

struct WeirdPayload {
    std::string name;

    bool operator==(const WeirdPayload&) const = default;
};

struct StatsPayload {
    std::int64_t packets_received = 0;
    std::int64_t packets_dropped = 0;

    bool operator==(const StatsPayload&) const = default;
};

/// One normalized security-monitoring event. Endpoints are already mapped
/// to stakeholders; unmapped addresses carry the UNKNOWN sentinel.
struct SecurityLogRecord {
    LogKind kind = LogKind::Conn;
    double timestamp = 0.0;
    StakeholderId originator_id = kUnknownStakeholder;
    StakeholderId responder_id = kUnknownStakeholder;
    std::variant<ConnPayload, NoticePayload, WeirdPayload, StatsPayload> payload;

    bool operator==(const SecurityLogRecord&) const = default;
};

void validate(const SecurityLogRecord& record);

enum class SlaEventKind { Violation, Warning };

std::string to_string(SlaEventKind kind);
SlaEventKind parse_sla_event_kind(const std::string& text);

struct SlaEvent {
    StakeholderId provider_id;
    double timestamp = 0.0;
    SlaEventKind kind = SlaEventKind::Violation;

    bool operator==(const SlaEvent&) const = default;
};

void validate(const SlaEvent& event);

/// One party's satisfaction rating of one interaction with a target.
struct FeedbackRecord {
    StakeholderId source_id;  // the rating party
    StakeholderId target_id;  // the rated party
    AssetType offer_asset_type = AssetType::Ran;
    double satisfaction = 0.0;      // in [0,1]
    std::int64_t window_index = 0;  // feedback window the rating falls in
    double timestamp = 0.0;

    bool operator==(const FeedbackRecord&) const = default;
};

void validate(const FeedbackRecord& record);

/// A third party's opinion about a target, as published to the ledger.
struct Recommendation {
    StakeholderId recommender_id;
    StakeholderId target_id;
    double value = 0.0;  // in [0,1]
    double timestamp = 0.0;

    bool operator==(const Recommendation&) const = default;
};

void validate(const Recommendation& rec);

/// A trustor's running bookkeeping for one recommender. Influence is
/// derived during community aggregation and deliberately not stored here.
struct RecommenderLedgerEntry {
    StakeholderId recommender_id;
    double last_trust = 0.5;            // trustor's latest score for the recommender
    double recommendation_trust = 0.5;  // how accurate past recommendations proved

    bool operator==(const RecommenderLedgerEntry&) const = default;
};

void validate(const RecommenderLedgerEntry& entry);

/// A trustor's current score and evidence summary for one trustee.
struct TrustState {
    StakeholderId trustor_id;
    StakeholderId trustee_id;
    double score = 0.0;
    double direct_component = 0.0;
    double community_component = 0.0;
    std::int64_t evidence_interactions = 0;
    bool provisional = false;  // score is the bootstrap value, zero evidence
    double updated_at = 0.0;

    bool operator==(const TrustState&) const = default;
};

void validate(const TrustState& state);

}  // namespace trustmesh
