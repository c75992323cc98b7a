#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trustmesh/types.hpp"

// Storage split: every domain keeps a private store of its own observations
// and trust states; interaction facts and recommendations that the whole
// marketplace relies on live in a shared append-only ledger.

namespace trustmesh {

/// Append-only shared record of interactions and recommendations. Entries
/// keep their append order; nothing is ever removed or rewritten.
class SharedLedger {
  public:
    /// Validates, then appends. Throws ValidationError on bad records.
    void push_interaction(const InteractionRecord& record);
    void push_recommendation(const Recommendation& record);

    const std::vector<InteractionRecord>& interactions() const { return interactions_; }
    const std::vector<Recommendation>& recommendations() const { return recommendations_; }

    /// Interactions where the given stakeholder was the trustee.
    std::vector<InteractionRecord> interactions_about(const StakeholderId& trustee) const;

    /// Distinct stakeholders that have interacted with `target` as trustor,
    /// most recent first (recorded_at, ties broken by later append). `exclude`
    /// and the target itself never appear.
    std::vector<StakeholderId> find_recommenders(const StakeholderId& target,
                                                 const StakeholderId& exclude) const;

    /// Recommendations about `target`, in append order.
    std::vector<Recommendation> recommendations_about(const StakeholderId& target) const;

    std::size_t size() const { return interactions_.size() + recommendations_.size(); }

  private:
    std::vector<InteractionRecord> interactions_;
    std::vector<Recommendation> recommendations_;
};

/// One domain's private view: trust states it computed, its ledger of
/// recommender reliability, and the feedback it recorded locally.
struct PrivateStore {
    StakeholderId domain_id;
    // keyed by trustee; trustor is always domain_id
    std::map<StakeholderId, TrustState> trust_states;
    std::map<StakeholderId, RecommenderLedgerEntry> recommender_ledger;
    std::vector<FeedbackRecord> feedback_log;

    /// Insert or replace. Throws ValidationError if the state's trustor is
    /// not this domain.
    void put_trust_state(const TrustState& state);
    std::optional<TrustState> get_trust_state(const StakeholderId& trustee) const;

    void put_ledger_entry(const RecommenderLedgerEntry& entry);
    /// Missing entries come back at bootstrap values.
    RecommenderLedgerEntry ledger_entry_or_default(const StakeholderId& recommender) const;

    void append_feedback(const FeedbackRecord& record);
};

/// Serialize a private store to line-delimited JSON: a header line, one
/// kind-tagged line per record, and a footer with the record count so a
/// truncated file is detectable. Writes to a temp file then renames.
void save_private_store(const PrivateStore& store, const std::filesystem::path& path);

/// Inverse of save_private_store. Throws StorageError (with the line number)
/// on malformed lines, unknown kinds, header/footer mismatch, or truncation.
PrivateStore load_private_store(const std::filesystem::path& path);

void save_shared_ledger(const SharedLedger& ledger, const std::filesystem::path& path);
SharedLedger load_shared_ledger(const std::filesystem::path& path);

}  // namespace trustmesh
