#include "trustmesh/discovery.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "trustmesh/errors.hpp"
#include "trustmesh/update.hpp"

namespace trustmesh {

std::vector<ProductOffer> prefilter(std::span<const ProductOffer> offers,
                                    const ConstraintFilter& filter, double as_of) {
    std::vector<ProductOffer> out;
    for (const ProductOffer& offer : offers) {
        if (!offer_live_at(offer, as_of)) continue;
        if (filter.asset_types && !filter.asset_types->count(offer.asset_type)) continue;
        if (filter.locations && !filter.locations->count(offer.location)) continue;
        if (filter.max_price && offer.price > *filter.max_price) continue;
        out.push_back(offer);
    }
    return out;
}

double intent_score(const ProductOffer& offer,
                    std::span<const ProductOffer> candidates,
                    const IntentPriorities& priorities) {
    double min_price = std::numeric_limits<double>::infinity();
    double max_price = -std::numeric_limits<double>::infinity();
    for (const ProductOffer& c : candidates) {
        min_price = std::min(min_price, c.price);
        max_price = std::max(max_price, c.price);
    }

    auto criterion = [&](const std::string& name) -> double {
        if (name == "price") {
            if (!(max_price > min_price)) return 1.0;
            return 1.0 - (offer.price - min_price) / (max_price - min_price);
        }
        if (name == "proximity") {
            if (!priorities.reference_location) return 0.5;
            return offer.location == *priorities.reference_location ? 1.0 : 0.0;
        }
        // performance
        auto it = priorities.performance_hint.find(offer.offer_id);
        return it == priorities.performance_hint.end() ? 0.5 : it->second;
    };

    double total_weight = 0.0;
    for (const auto& [name, weight] : priorities.weights) total_weight += weight;
    double score = 0.0;
    for (const auto& [name, weight] : priorities.weights)
        score += weight / total_weight * criterion(name);
    return score;
}

namespace {

std::vector<RankedOffer> assemble_ranking(std::vector<RankedOffer> ranked) {
    std::sort(ranked.begin(), ranked.end(), [](const RankedOffer& a, const RankedOffer& b) {
        if (a.trust.score != b.trust.score) return a.trust.score > b.trust.score;
        if (a.intent_score != b.intent_score) return a.intent_score > b.intent_score;
        if (a.trust.provisional != b.trust.provisional) return !a.trust.provisional;
        return a.offer.offer_id < b.offer.offer_id;
    });
    for (std::size_t i = 0; i < ranked.size(); ++i)
        ranked[i].rank = static_cast<int>(i) + 1;
    return ranked;
}

}  // namespace

std::vector<RankedOffer> rank_offers(const StakeholderId& trustor,
                                     std::span<const ProductOffer> candidates,
                                     const Evidence& evidence,
                                     const IntentPriorities& priorities,
                                     const EngineConfig& config,
                                     double now) {
    std::vector<RankedOffer> ranked;
    ranked.reserve(candidates.size());
    for (const ProductOffer& offer : candidates) {
        RankedOffer r;
        r.offer = offer;
        r.trust = score_target(trustor, offer.provider_id, offer.asset_type, evidence,
                               config, now);
        r.intent_score = intent_score(offer, candidates, priorities);
        ranked.push_back(std::move(r));
    }
    return assemble_ranking(std::move(ranked));
}

std::vector<RankedOffer> rank_with_scores(std::span<const ProductOffer> candidates,
                                          const std::map<std::string, TrustState>& scores,
                                          const IntentPriorities& priorities) {
    std::vector<RankedOffer> ranked;
    ranked.reserve(candidates.size());
    for (const ProductOffer& offer : candidates) {
        auto it = scores.find(offer.offer_id);
        if (it == scores.end())
            throw ContractError("rank_with_scores: no trust state for offer '" +
                                offer.offer_id + "'");
        RankedOffer r;
        r.offer = offer;
        r.trust = it->second;
        r.intent_score = intent_score(offer, candidates, priorities);
        ranked.push_back(std::move(r));
    }
    return assemble_ranking(std::move(ranked));
}

MonitoringDirective select_offer(std::span<const RankedOffer> ranked,
                                 const std::string& choice,
                                 SharedLedger& ledger,
                                 double now,
                                 const UpdateConfig& update) {
    const RankedOffer* chosen = nullptr;
    for (const RankedOffer& r : ranked)
        if (r.offer.offer_id == choice) {
            chosen = &r;
            break;
        }
    if (!chosen)
        throw ContractError("select_offer: offer '" + choice + "' is not in the ranked list");

    InteractionRecord record;
    record.trustor_id = chosen->trust.trustor_id;
    record.trustee_id = chosen->offer.provider_id;
    record.offer_id = chosen->offer.offer_id;
    record.asset_type = chosen->offer.asset_type;
    record.start_date = now;
    record.interaction_count = 1;
    record.satisfaction = 0.5;  // neutral until real feedback lands
    record.recorded_at = now;
    ledger.push_interaction(record);

    MonitoringDirective directive;
    directive.trustor_id = record.trustor_id;
    directive.provider_id = record.trustee_id;
    directive.offer_id = record.offer_id;
    directive.start_time = now;
    directive.window_seconds = update.window_seconds;
    directive.first_window_index = window_of(now, update);
    return directive;
}

}  // namespace trustmesh
