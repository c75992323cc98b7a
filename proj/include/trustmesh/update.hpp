#pragma once

#include <cstdint>
#include <span>

#include "trustmesh/config.hpp"
#include "trustmesh/types.hpp"

// Continuous trust maintenance: per-window aggregation of monitoring events,
// the weighted reward/punishment score, and the asymmetric score update
// applied at each window boundary.

namespace trustmesh {

/// Aggregated monitoring evidence for one (trustor, trustee) pair in one
/// time window.
struct WindowLogSummary {
    StakeholderId trustor_id;
    StakeholderId trustee_id;
    std::int64_t window_index = 0;
    std::int64_t conn_total = 0;
    std::int64_t conn_success = 0;
    double notice_weighted = 0.0;
    std::int64_t weird_count = 0;
    std::int64_t packets_received = 0;
    std::int64_t packets_dropped = 0;

    bool operator==(const WindowLogSummary&) const = default;
};

/// Windows are half-open: [index * window_seconds, (index+1) * window_seconds).
bool in_window(double timestamp, std::int64_t window_index, const UpdateConfig& config);
std::int64_t window_of(double timestamp, const UpdateConfig& config);

/// Aggregate the window's records for one pair. Connections count when both
/// endpoints are the pair (either direction); notices and weird events when
/// either endpoint belongs to the pair; stats records are monitor-level and
/// always count. Records outside the window raise ContractError naming the
/// offending timestamp.
WindowLogSummary summarize_window(std::span<const SecurityLogRecord> records,
                                  const StakeholderId& trustor,
                                  const StakeholderId& trustee,
                                  std::int64_t window_index,
                                  const UpdateConfig& config);

/// Weighted reward/punishment in [0,1]. Dimension scores: connection success
/// ratio (0.5 with no connections), 1 minus capped notice weight, 1 minus
/// capped weird count, 1 minus packet drop ratio (0.5 with no packets).
double rp_score(const WindowLogSummary& summary, const UpdateConfig& config);

/// Asymmetric score update. Movement is proportional to the distance of rp
/// from the neutral 0.5 and to the remaining headroom (1 - old)/10; the
/// result is clamped to [0,1]. A score of 1.0 is a fixed point for every rp.
double apply_update(double old_score, double rp);

struct UpdateCycleResult {
    TrustState state;  // updated score, updated_at = window end
    WindowLogSummary summary;
    double rp = 0.0;
    double old_score = 0.0;
};

/// One window's summarize -> rp -> apply chain. Pure: the input state is
/// untouched; the returned state carries the new score and is no longer
/// provisional (monitoring evidence exists).
UpdateCycleResult run_update_cycle(const TrustState& state,
                                   std::span<const SecurityLogRecord> records,
                                   std::int64_t window_index,
                                   const UpdateConfig& config);

}  // namespace trustmesh
