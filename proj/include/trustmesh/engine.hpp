#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trustmesh/config.hpp"
#include "trustmesh/types.hpp"

// Adapted PeerTrust scoring. All operations are pure functions over
// immutable evidence snapshots and return values in [0,1]; any number of
// scoring calls may run concurrently on the same snapshot.

namespace trustmesh {

/// Everything a trustor can see when scoring targets: its own feedback plus
/// feedback and recommendations gathered from the shared ledger, and its
/// private recommender bookkeeping.
struct Evidence {
    std::vector<FeedbackRecord> feedback;         // all visible feedback, any target
    std::vector<Recommendation> recommendations;  // all visible recommendations
    std::map<StakeholderId, RecommenderLedgerEntry> recommender_ledger;
    std::int64_t current_window = -1;  // -1: derive from the newest feedback
};

/// Blended satisfaction for a target: provider-level mean across all
/// feedback, mixed with the mean over feedback matching `asset_type`.
/// Without a matching offer-level subset the provider-level mean stands
/// alone; with no feedback at all the bootstrap value is returned.
double satisfaction(const StakeholderId& target, std::optional<AssetType> asset_type,
                    std::span<const FeedbackRecord> feedback, const EngineConfig& config);

/// Rating similarity over targets both parties evaluated: 1 minus the root
/// mean square distance of their per-target satisfaction means. No common
/// targets is neutral (0.5).
double psm_similarity(std::span<const FeedbackRecord> self_feedback,
                      std::span<const FeedbackRecord> peer_feedback);

/// Credibility of one feedback source, normalized so that the credibilities
/// of all contributing sources sum to 1. A single source is fully credible.
/// Throws ContractError when `source` is not a contributing source.
double credibility(std::span<const FeedbackRecord> trustor_feedback,
                   const StakeholderId& source,
                   const std::map<StakeholderId, std::vector<FeedbackRecord>>&
                       all_feedback_by_source);

/// Decayed, capped feedback volume over recent windows, newest first.
/// Counts beyond tf_window_count are dropped (oldest first); missing
/// windows count as zero.
double transaction_factor(std::span<const std::int64_t> feedback_counts_per_window,
                          const EngineConfig& config);

/// Confidence in one recommendation: a mix of the trustor's trust in the
/// recommender and the recommendation weighted by recommendation trust.
/// Throws ContractError when entry and recommendation disagree on the
/// recommender.
double confidence(const RecommenderLedgerEntry& entry, const Recommendation& rec,
                  const EngineConfig& config);

struct CommunityContribution {
    StakeholderId recommender_id;
    double confidence = 0.0;
    double influence = 0.0;  // normalized recommendation-trust share
};

struct CommunityFactorDetail {
    double participation = 0.0;  // min(1, published recs / interactions)
    double aggregation = 0.0;    // influence-weighted confidence sum
    double value = 0.0;          // (participation + aggregation) / 2
    std::vector<CommunityContribution> contributions;
};

/// Community pillar for a target. Every recommendation must be about
/// `target` and its recommender must appear in `ledger` (ContractError
/// otherwise). Influence shares are uniform when all recommendation-trust
/// values are zero.
CommunityFactorDetail community_factor_detailed(
    const StakeholderId& target, std::span<const Recommendation> recs,
    const std::map<StakeholderId, RecommenderLedgerEntry>& ledger,
    std::int64_t published_recs, std::int64_t interactions_of_target,
    const EngineConfig& config);

double community_factor(const StakeholderId& target, std::span<const Recommendation> recs,
                        const std::map<StakeholderId, RecommenderLedgerEntry>& ledger,
                        std::int64_t published_recs, std::int64_t interactions_of_target,
                        const EngineConfig& config);

/// Final composition: alpha_direct * direct + (1 - alpha_direct) * community.
double compose_trust(double direct, double community, const EngineConfig& config);

/// Full scoring pipeline for one (trustor, target) pair. Recomputes from the
/// evidence snapshot on every call; nothing is cached. With no evidence of
/// any kind the result is the bootstrap score flagged provisional.
///
/// The direct pillar averages, over every feedback record about the target,
/// the source's blended satisfaction times its normalized credibility times
/// the target's transaction factor. The community pillar considers the most
/// recent recommendation per recommender; recommenders absent from the
/// trustor's ledger enter at the bootstrap values.
TrustState score_target(const StakeholderId& trustor, const StakeholderId& target,
                        std::optional<AssetType> asset_type, const Evidence& evidence,
                        const EngineConfig& config, double now = 0.0);

/// Move recommendation trust toward the accuracy of the latest
/// recommendation: RT' = (1-eta)*RT + eta*(1 - |rec - realized|).
RecommenderLedgerEntry update_recommendation_trust(const RecommenderLedgerEntry& entry,
                                                   double rec_value,
                                                   double realized_satisfaction,
                                                   const EngineConfig& config);

}  // namespace trustmesh
