#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "trustmesh/config.hpp"
#include "trustmesh/engine.hpp"
#include "trustmesh/storage.hpp"
#include "trustmesh/types.hpp"

// Offer discovery pipeline: constraint pre-classification, intent scoring,
// trust ranking, and the selection step that arms monitoring.

namespace trustmesh {

/// Hard constraints. Absent fields match everything.
struct ConstraintFilter {
    std::optional<std::set<AssetType>> asset_types;
    std::optional<std::set<std::string>> locations;
    std::optional<double> max_price;

    bool operator==(const ConstraintFilter&) const = default;
};

/// Live offers passing every present constraint, input order preserved.
std::vector<ProductOffer> prefilter(std::span<const ProductOffer> offers,
                                    const ConstraintFilter& filter, double as_of);

struct RankedOffer {
    ProductOffer offer;
    TrustState trust;
    double intent_score = 0.0;
    int rank = 0;  // 1-based, assigned after sorting

    bool operator==(const RankedOffer&) const = default;
};

/// Intent fit in [0,1] for one offer against the candidate set that defines
/// the price range. Price maps [min,max] linearly to [1,0] (degenerate range
/// scores 1). Proximity is 1 on an exact location match with
/// reference_location, 0 otherwise, 0.5 when no reference is set.
/// Performance reads performance_hint[offer_id], 0.5 when absent. Criterion
/// weights are normalized before mixing.
double intent_score(const ProductOffer& offer,
                    std::span<const ProductOffer> candidates,
                    const IntentPriorities& priorities);

/// Score every candidate's provider with score_target (fresh recomputation,
/// nothing cached), attach intent scores, sort by (trust desc, intent desc,
/// evidence-backed before provisional, offer_id asc), assign ranks 1..n.
/// The result is a permutation of the candidates; prefilter first.
std::vector<RankedOffer> rank_offers(const StakeholderId& trustor,
                                     std::span<const ProductOffer> candidates,
                                     const Evidence& evidence,
                                     const IntentPriorities& priorities,
                                     const EngineConfig& config,
                                     double now);

/// Same ranking from trust states computed elsewhere, keyed by offer_id.
/// Lets callers parallelize the scoring step and keep ordering identical.
/// Throws ContractError when an offer has no precomputed state.
std::vector<RankedOffer> rank_with_scores(std::span<const ProductOffer> candidates,
                                          const std::map<std::string, TrustState>& scores,
                                          const IntentPriorities& priorities);

/// Where monitoring picks up after a selection.
struct MonitoringDirective {
    StakeholderId trustor_id;
    StakeholderId provider_id;
    std::string offer_id;
    double start_time = 0.0;
    double window_seconds = 0.0;
    std::int64_t first_window_index = 0;

    bool operator==(const MonitoringDirective&) const = default;
};

/// Commit to the offer named by `choice`: push the interaction opening the
/// trust relationship to the shared ledger (neutral satisfaction until real
/// feedback lands) and return the monitoring window layout. Throws
/// ContractError when `choice` is not in `ranked`; nothing is pushed then.
MonitoringDirective select_offer(std::span<const RankedOffer> ranked,
                                 const std::string& choice,
                                 SharedLedger& ledger,
                                 double now,
                                 const UpdateConfig& update);

}  // namespace trustmesh
