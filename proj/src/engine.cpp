#include "trustmesh/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "trustmesh/errors.hpp"

namespace trustmesh {

namespace {

double clamp_unit(double v) { return std::min(1.0, std::max(0.0, v)); }

/// Per-target satisfaction means of one party's feedback.
std::map<StakeholderId, double> target_means(std::span<const FeedbackRecord> feedback) {
    std::map<StakeholderId, std::pair<double, std::int64_t>> sums;
    for (const FeedbackRecord& r : feedback) {
        auto& [total, count] = sums[r.target_id];
        total += r.satisfaction;
        ++count;
    }
    std::map<StakeholderId, double> means;
    for (const auto& [target, sum] : sums) means[target] = sum.first / sum.second;
    return means;
}

}  // namespace

double satisfaction(const StakeholderId& target, std::optional<AssetType> asset_type,
                    std::span<const FeedbackRecord> feedback, const EngineConfig& config) {
    (void)target;  // callers pass feedback already scoped to the target
    if (feedback.empty()) return config.bootstrap_trust;
    double provider_sum = 0.0;
    double offer_sum = 0.0;
    std::int64_t offer_count = 0;
    for (const FeedbackRecord& r : feedback) {
        provider_sum += r.satisfaction;
        if (asset_type && r.offer_asset_type == *asset_type) {
            offer_sum += r.satisfaction;
            ++offer_count;
        }
    }
    const double provider_mean = provider_sum / static_cast<double>(feedback.size());
    if (offer_count == 0) return provider_mean;
    const double offer_mean = offer_sum / static_cast<double>(offer_count);
    return config.provider_offer_blend * provider_mean +
           (1.0 - config.provider_offer_blend) * offer_mean;
}

double psm_similarity(std::span<const FeedbackRecord> self_feedback,
                      std::span<const FeedbackRecord> peer_feedback) {
    const auto self_means = target_means(self_feedback);
    const auto peer_means = target_means(peer_feedback);
    double sum_sq = 0.0;
    std::int64_t common = 0;
    for (const auto& [target, mean] : self_means) {
        auto it = peer_means.find(target);
        if (it == peer_means.end()) continue;
        const double diff = mean - it->second;
        sum_sq += diff * diff;
        ++common;
    }
    if (common == 0) return 0.5;
    return clamp_unit(1.0 - std::sqrt(sum_sq / static_cast<double>(common)));
}

double credibility(std::span<const FeedbackRecord> trustor_feedback,
                   const StakeholderId& source,
                   const std::map<StakeholderId, std::vector<FeedbackRecord>>&
                       all_feedback_by_source) {
    auto self = all_feedback_by_source.find(source);
    if (self == all_feedback_by_source.end())
        throw ContractError("credibility: unknown source '" + source + "'");
    if (all_feedback_by_source.size() == 1) return 1.0;
    double total = 0.0;
    double own = 0.0;
    for (const auto& [id, feedback] : all_feedback_by_source) {
        const double sim = psm_similarity(trustor_feedback, feedback);
        total += sim;
        if (id == source) own = sim;
    }
    if (total <= 0.0) return 0.0;
    return own / total;
}

double transaction_factor(std::span<const std::int64_t> feedback_counts_per_window,
                          const EngineConfig& config) {
    const std::size_t window_count = static_cast<std::size_t>(config.tf_window_count);
    const double cap = static_cast<double>(config.tf_window_cap);
    double numerator = 0.0;
    double denominator = 0.0;
    double decay = 1.0;
    for (std::size_t k = 0; k < window_count; ++k) {
        if (k < feedback_counts_per_window.size()) {
            const double count = static_cast<double>(
                std::max<std::int64_t>(0, feedback_counts_per_window[k]));
            numerator += decay * std::min(1.0, count / cap);
        }
        denominator += decay;
        decay *= config.tf_decay;
    }
    return numerator / denominator;
}

double confidence(const RecommenderLedgerEntry& entry, const Recommendation& rec,
                  const EngineConfig& config) {
    if (entry.recommender_id != rec.recommender_id)
        throw ContractError("confidence: ledger entry for '" + entry.recommender_id +
                            "' does not match recommendation from '" +
                            rec.recommender_id + "'");
    return config.alpha_confidence * entry.last_trust +
           (1.0 - config.alpha_confidence) * entry.recommendation_trust * rec.value;
}

CommunityFactorDetail community_factor_detailed(
    const StakeholderId& target, std::span<const Recommendation> recs,
    const std::map<StakeholderId, RecommenderLedgerEntry>& ledger,
    std::int64_t published_recs, std::int64_t interactions_of_target,
    const EngineConfig& config) {
    CommunityFactorDetail detail;
    detail.participation =
        interactions_of_target <= 0
            ? 0.0
            : std::min(1.0, static_cast<double>(published_recs) /
                                static_cast<double>(interactions_of_target));

    double rt_total = 0.0;
    for (const Recommendation& rec : recs) {
        if (rec.target_id != target)
            throw ContractError("community_factor: recommendation about '" +
                                rec.target_id + "' passed for target '" + target + "'");
        auto it = ledger.find(rec.recommender_id);
        if (it == ledger.end())
            throw ContractError("community_factor: recommender '" + rec.recommender_id +
                                "' missing from ledger");
        CommunityContribution c;
        c.recommender_id = rec.recommender_id;
        c.confidence = confidence(it->second, rec, config);
        c.influence = it->second.recommendation_trust;  // normalized below
        rt_total += it->second.recommendation_trust;
        detail.contributions.push_back(std::move(c));
    }
    const std::size_t n = detail.contributions.size();
    for (CommunityContribution& c : detail.contributions) {
        c.influence = rt_total > 0.0 ? c.influence / rt_total
                                     : 1.0 / static_cast<double>(n);
        detail.aggregation += c.confidence * c.influence;
    }
    detail.value = clamp_unit((detail.participation + detail.aggregation) / 2.0);
    return detail;
}

double community_factor(const StakeholderId& target, std::span<const Recommendation> recs,
                        const std::map<StakeholderId, RecommenderLedgerEntry>& ledger,
                        std::int64_t published_recs, std::int64_t interactions_of_target,
                        const EngineConfig& config) {
    return community_factor_detailed(target, recs, ledger, published_recs,
                                     interactions_of_target, config)
        .value;
}

double compose_trust(double direct, double community, const EngineConfig& config) {
    return config.alpha_direct * direct + (1.0 - config.alpha_direct) * community;
}

TrustState score_target(const StakeholderId& trustor, const StakeholderId& target,
                        std::optional<AssetType> asset_type, const Evidence& evidence,
                        const EngineConfig& config, double now) {
    TrustState state;
    state.trustor_id = trustor;
    state.trustee_id = target;
    state.updated_at = now;

    std::vector<FeedbackRecord> about_target;
    std::int64_t newest_window = 0;
    bool any_feedback = false;
    for (const FeedbackRecord& r : evidence.feedback) {
        if (!any_feedback || r.window_index > newest_window) newest_window = r.window_index;
        any_feedback = true;
        if (r.target_id == target) about_target.push_back(r);
    }
    std::vector<Recommendation> about_recs;
    for (const Recommendation& r : evidence.recommendations)
        if (r.target_id == target) about_recs.push_back(r);

    const std::int64_t interactions = static_cast<std::int64_t>(about_target.size());
    const std::int64_t published = static_cast<std::int64_t>(about_recs.size());
    if (interactions == 0 && published == 0) {
        state.score = config.bootstrap_trust;
        state.provisional = true;
        return state;
    }

    // direct pillar
    double direct = 0.0;
    if (interactions > 0) {
        const std::int64_t current_window =
            evidence.current_window >= 0 ? evidence.current_window : newest_window;
        std::vector<std::int64_t> counts(static_cast<std::size_t>(config.tf_window_count), 0);
        for (const FeedbackRecord& r : about_target) {
            const std::int64_t age = current_window - r.window_index;
            if (age >= 0 && age < config.tf_window_count)
                ++counts[static_cast<std::size_t>(age)];
        }
        const double tf = transaction_factor(counts, config);

        std::map<StakeholderId, std::vector<FeedbackRecord>> full_by_source;
        std::set<StakeholderId> contributing;
        for (const FeedbackRecord& r : about_target) contributing.insert(r.source_id);
        for (const FeedbackRecord& r : evidence.feedback)
            if (contributing.count(r.source_id)) full_by_source[r.source_id].push_back(r);

        std::vector<FeedbackRecord> own;
        for (const FeedbackRecord& r : evidence.feedback)
            if (r.source_id == trustor) own.push_back(r);

        std::map<StakeholderId, double> cred;
        std::map<StakeholderId, double> sat;
        for (const StakeholderId& source : contributing) {
            cred[source] = credibility(own, source, full_by_source);
            std::vector<FeedbackRecord> from_source;
            for (const FeedbackRecord& r : about_target)
                if (r.source_id == source) from_source.push_back(r);
            sat[source] = satisfaction(target, asset_type, from_source, config);
        }

        double sum = 0.0;
        for (const FeedbackRecord& r : about_target)
            sum += sat[r.source_id] * cred[r.source_id] * tf;
        direct = sum / static_cast<double>(interactions);
    }

    // community pillar: most recent recommendation per recommender
    std::map<StakeholderId, const Recommendation*> latest;
    for (const Recommendation& r : about_recs) {
        auto [it, inserted] = latest.try_emplace(r.recommender_id, &r);
        if (!inserted && r.timestamp >= it->second->timestamp) it->second = &r;
    }
    std::vector<Recommendation> considered;
    considered.reserve(latest.size());
    for (const auto& [id, rec] : latest) considered.push_back(*rec);
    std::map<StakeholderId, RecommenderLedgerEntry> ledger;
    for (const auto& [id, rec] : latest) {
        auto it = evidence.recommender_ledger.find(id);
        ledger[id] = it != evidence.recommender_ledger.end()
                         ? it->second
                         : RecommenderLedgerEntry{id, config.bootstrap_trust,
                                                  config.bootstrap_trust};
    }
    const double community =
        community_factor(target, considered, ledger, published, interactions, config);

    state.direct_component = clamp_unit(direct);
    state.community_component = community;
    state.score = clamp_unit(compose_trust(state.direct_component, community, config));
    state.evidence_interactions = interactions;
    state.provisional = false;
    return state;
}

RecommenderLedgerEntry update_recommendation_trust(const RecommenderLedgerEntry& entry,
                                                   double rec_value,
                                                   double realized_satisfaction,
                                                   const EngineConfig& config) {
    RecommenderLedgerEntry updated = entry;
    const double accuracy = 1.0 - std::fabs(rec_value - realized_satisfaction);
    updated.recommendation_trust = (1.0 - config.rt_learning_rate) * entry.recommendation_trust +
                                   config.rt_learning_rate * accuracy;
    updated.recommendation_trust = clamp_unit(updated.recommendation_trust);
    return updated;
}

}  // namespace trustmesh
