#include "trustmesh/serde.hpp"

#include "json_util.hpp"
#include "trustmesh/errors.hpp"

namespace trustmesh {

using detail::check_keys;
using detail::get_bool;
using detail::get_double;
using detail::get_int;
using detail::get_optional_double;
using detail::get_string;
using detail::json;
using detail::parse_object;

std::string render_offer_line(const ProductOffer& offer) {
    json j{{"asset_type", to_string(offer.asset_type)},
           {"location", offer.location},
           {"offer_id", offer.offer_id},
           {"price", offer.price},
           {"provider_id", offer.provider_id},
           {"published_at", offer.published_at}};
    if (offer.withdrawn_at) j["withdrawn_at"] = *offer.withdrawn_at;
    return j.dump();
}

ProductOffer parse_offer_line(std::string_view line) {
    const char* what = "offer";
    json j = parse_object(line, what);
    check_keys(j, {"asset_type", "location", "offer_id", "price", "provider_id",
                   "published_at", "withdrawn_at"},
               what);
    ProductOffer offer;
    offer.offer_id = get_string(j, "offer_id", what);
    offer.provider_id = get_string(j, "provider_id", what);
    offer.asset_type = parse_asset_type(get_string(j, "asset_type", what));
    offer.location = get_string(j, "location", what);
    offer.price = get_double(j, "price", what);
    offer.published_at = get_double(j, "published_at", what);
    offer.withdrawn_at = get_optional_double(j, "withdrawn_at", what);
    validate(offer);
    return offer;
}

std::string render_interaction_line(const InteractionRecord& record) {
    json j{{"asset_type", to_string(record.asset_type)},
           {"interaction_count", record.interaction_count},
           {"offer_id", record.offer_id},
           {"recorded_at", record.recorded_at},
           {"satisfaction", record.satisfaction},
           {"start_date", record.start_date},
           {"trustee_id", record.trustee_id},
           {"trustor_id", record.trustor_id}};
    return j.dump();
}

InteractionRecord parse_interaction_line(std::string_view line) {
    const char* what = "interaction";
    json j = parse_object(line, what);
    check_keys(j, {"asset_type", "interaction_count", "offer_id", "recorded_at",
                   "satisfaction", "start_date", "trustee_id", "trustor_id"},
               what);
    InteractionRecord record;
    record.trustor_id = get_string(j, "trustor_id", what);
    record.trustee_id = get_string(j, "trustee_id", what);
    record.offer_id = get_string(j, "offer_id", what);
    record.asset_type = parse_asset_type(get_string(j, "asset_type", what));
    record.start_date = get_double(j, "start_date", what);
    record.interaction_count = get_int(j, "interaction_count", what);
    record.satisfaction = get_double(j, "satisfaction", what);
    record.recorded_at = get_double(j, "recorded_at", what);
    validate(record);
    return record;
}

std::string render_sla_event_line(const SlaEvent& event) {
    json j{{"kind", to_string(event.kind)},
           {"provider_id", event.provider_id},
           {"timestamp", event.timestamp}};
    return j.dump();
}

SlaEvent parse_sla_event_line(std::string_view line) {
    const char* what = "sla_event";
    json j = parse_object(line, what);
    check_keys(j, {"kind", "provider_id", "timestamp"}, what);
    SlaEvent event;
    event.provider_id = get_string(j, "provider_id", what);
    event.timestamp = get_double(j, "timestamp", what);
    event.kind = parse_sla_event_kind(get_string(j, "kind", what));
    validate(event);
    return event;
}

std::string render_recommendation_line(const Recommendation& rec) {
    json j{{"recommender_id", rec.recommender_id},
           {"target_id", rec.target_id},
           {"timestamp", rec.timestamp},
           {"value", rec.value}};
    return j.dump();
}

Recommendation parse_recommendation_line(std::string_view line) {
    const char* what = "recommendation";
    json j = parse_object(line, what);
    check_keys(j, {"recommender_id", "target_id", "timestamp", "value"}, what);
    Recommendation rec;
    rec.recommender_id = get_string(j, "recommender_id", what);
    rec.target_id = get_string(j, "target_id", what);
    rec.value = get_double(j, "value", what);
    rec.timestamp = get_double(j, "timestamp", what);
    validate(rec);
    return rec;
}

std::string render_feedback_line(const FeedbackRecord& record) {
    json j{{"offer_asset_type", to_string(record.offer_asset_type)},
           {"satisfaction", record.satisfaction},
           {"source_id", record.source_id},
           {"target_id", record.target_id},
           {"timestamp", record.timestamp},
           {"window_index", record.window_index}};
    return j.dump();
}

FeedbackRecord parse_feedback_line(std::string_view line) {
    const char* what = "feedback";
    json j = parse_object(line, what);
    check_keys(j, {"offer_asset_type", "satisfaction", "source_id", "target_id",
                   "timestamp", "window_index"},
               what);
    FeedbackRecord record;
    record.source_id = get_string(j, "source_id", what);
    record.target_id = get_string(j, "target_id", what);
    record.offer_asset_type = parse_asset_type(get_string(j, "offer_asset_type", what));
    record.satisfaction = get_double(j, "satisfaction", what);
    record.window_index = get_int(j, "window_index", what);
    record.timestamp = get_double(j, "timestamp", what);
    validate(record);
    return record;
}

std::string render_trust_state_line(const TrustState& state) {
    json j{{"community_component", state.community_component},
           {"direct_component", state.direct_component},
           {"evidence_interactions", state.evidence_interactions},
           {"provisional", state.provisional},
           {"score", state.score},
           {"trustee_id", state.trustee_id},
           {"trustor_id", state.trustor_id},
           {"updated_at", state.updated_at}};
    return j.dump();
}

TrustState parse_trust_state_line(std::string_view line) {
    const char* what = "trust_state";
    json j = parse_object(line, what);
    check_keys(j, {"community_component", "direct_component", "evidence_interactions",
                   "provisional", "score", "trustee_id", "trustor_id", "updated_at"},
               what);
    TrustState state;
    state.trustor_id = get_string(j, "trustor_id", what);
    state.trustee_id = get_string(j, "trustee_id", what);
    state.score = get_double(j, "score", what);
    state.direct_component = get_double(j, "direct_component", what);
    state.community_component = get_double(j, "community_component", what);
    state.evidence_interactions = get_int(j, "evidence_interactions", what);
    state.provisional = get_bool(j, "provisional", what);
    state.updated_at = get_double(j, "updated_at", what);
    validate(state);
    return state;
}

std::string render_ledger_entry_line(const RecommenderLedgerEntry& entry) {
    json j{{"last_trust", entry.last_trust},
           {"recommendation_trust", entry.recommendation_trust},
           {"recommender_id", entry.recommender_id}};
    return j.dump();
}

RecommenderLedgerEntry parse_ledger_entry_line(std::string_view line) {
    const char* what = "ledger_entry";
    json j = parse_object(line, what);
    check_keys(j, {"last_trust", "recommendation_trust", "recommender_id"}, what);
    RecommenderLedgerEntry entry;
    entry.recommender_id = get_string(j, "recommender_id", what);
    entry.last_trust = get_double(j, "last_trust", what);
    entry.recommendation_trust = get_double(j, "recommendation_trust", what);
    validate(entry);
    return entry;
}

}  // namespace trustmesh
