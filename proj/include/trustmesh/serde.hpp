#pragma once

#include <string>
#include <string_view>

#include "trustmesh/types.hpp"

// One-line JSON record formats. Rendering is canonical (sorted keys,
// shortest round-trip numbers) so equal values produce identical bytes;
// parsing is strict: unknown fields are schema errors.

namespace trustmesh {

std::string render_offer_line(const ProductOffer& offer);
ProductOffer parse_offer_line(std::string_view line);

std::string render_interaction_line(const InteractionRecord& record);
InteractionRecord parse_interaction_line(std::string_view line);

std::string render_sla_event_line(const SlaEvent& event);
SlaEvent parse_sla_event_line(std::string_view line);

std::string render_recommendation_line(const Recommendation& rec);
Recommendation parse_recommendation_line(std::string_view line);

std::string render_feedback_line(const FeedbackRecord& record);
FeedbackRecord parse_feedback_line(std::string_view line);

std::string render_trust_state_line(const TrustState& state);
TrustState parse_trust_state_line(std::string_view line);

std::string render_ledger_entry_line(const RecommenderLedgerEntry& entry);
RecommenderLedgerEntry parse_ledger_entry_line(std::string_view line);

}  // namespace trustmesh
