#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trustmesh/config.hpp"
#include "trustmesh/discovery.hpp"
#include "trustmesh/storage.hpp"
#include "trustmesh/types.hpp"

// Scenario driver. Generates a multi-domain marketplace from a seed, runs
// pre-history feedback rounds, discovery, selection, and monitored update
// windows, and reports everything needed to audit the run.
//
// Generative model (the evaluation needs an explicit ground truth):
//   - Domain i has one consumer "d{i}.op" and providers "d{i}.p{k}", each
//     publishing offers "d{i}.p{k}.o{j}".
//   - Every provider carries a latent quality drawn uniformly from
//     [quality_min, quality_max], unless overridden. Satisfaction samples are
//     quality +- 0.05, clamped to [0,1].
//   - Pre-history: history_rounds rounds, one per window starting at window 0.
//     Every consumer interacts with every provider each round and records
//     feedback; consumers outside the trustor's domain also publish
//     recommendations each round. Honest recommenders stay within +-0.1 of
//     the latent quality; bad-mouthers report uniform [0, 0.05] about their
//     victim and stay honest about everyone else. After each round the
//     trustor scores every recommendation against its own realized
//     satisfaction and updates recommendation trust.
//   - Selection happens right after pre-history: rank all live offers, pick
//     the top one unless selected_offer scripts the choice.
//   - Monitored windows are numbered 1..windows. Each produces a synthetic
//     security-event trace for the chosen provider whose severity profile
//     follows the provider's quality (or an incident_schedule entry), then
//     one update cycle. Trajectories therefore hold windows + 1 scores, the
//     initial score first.
//   - When bad_mouther_fraction > 0 the same seed is replayed with zero
//     attackers to obtain the honest-only baseline ranking; per-entity
//     random streams keep every other draw identical between the two runs.

namespace trustmesh {

struct TrajectoryPoint {
    std::int64_t window = 0;  // scenario-local, 1-based
    StakeholderId trustor_id;
    StakeholderId trustee_id;
    double rp = 0.0;
    double old_score = 0.0;
    double new_score = 0.0;

    bool operator==(const TrajectoryPoint&) const = default;
};

struct ScenarioResult {
    ScenarioConfig config;
    std::vector<ProductOffer> offers;
    std::vector<RankedOffer> initial_ranking;
    std::vector<RankedOffer> final_ranking;
    // (trustor, trustee) -> windows + 1 scores, initial score first
    std::map<std::pair<StakeholderId, StakeholderId>, std::vector<double>> trajectories;
    std::vector<TrajectoryPoint> metrics;
    MonitoringDirective directive;
    SharedLedger ledger;
    PrivateStore store;  // the trustor domain's private view at the end
    std::optional<StakeholderId> victim_id;
    int victim_rank = 0;           // final ranking under attack; 0 when no victim
    int victim_baseline_rank = 0;  // final ranking of the honest-only replay
    std::string config_hash;
};

/// Everything materialized before discovery runs: the offer catalog, the
/// shared ledger filled by the pre-history rounds, the trustor's private
/// store (feedback plus recommender bookkeeping), and per-provider
/// monitoring-event traces for every monitored window.
struct GeneratedScenario {
    StakeholderId trustor;
    std::vector<ProductOffer> offers;
    SharedLedger ledger;
    PrivateStore store;
    // provider -> traces for windows 1..windows (index 0 = window 1)
    std::map<StakeholderId, std::vector<std::vector<SecurityLogRecord>>> event_traces;
    std::optional<StakeholderId> victim;
};

/// Deterministic world generation: identical configs yield byte-identical
/// catalogs, ledgers and traces.
GeneratedScenario generate_scenario(const ScenarioConfig& config);

/// Run one scenario end to end. Pure function of the config: identical
/// configs produce identical results, byte for byte once serialized.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Rank preservation sweep: replay the scenario with 0..N bad-mouthers
/// (N = recommender count) and report the first fraction at which the
/// victim's final rank diverges from the honest baseline.
struct SweepPoint {
    int bad_mouthers = 0;
    double fraction = 0.0;
    int victim_rank = 0;
    int baseline_rank = 0;
    bool preserved = true;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::optional<double> first_failing_fraction;
};

SweepResult run_sweep(const ScenarioConfig& base);

// Output writers. All of them emit canonical text so reruns diff clean.
void write_metrics_csv(std::span<const TrajectoryPoint> metrics, std::ostream& out);
void write_ranking_csv(std::span<const RankedOffer> ranking, std::ostream& out);
void write_trajectories_jsonl(const ScenarioResult& result, std::ostream& out);
void write_run_manifest(const ScenarioResult& result, std::ostream& out);
void write_sweep_csv(const SweepResult& result, std::ostream& out);

/// metrics.csv, ranking.csv, trajectories.jsonl, run-manifest.json under dir.
void write_scenario_outputs(const ScenarioResult& result, const std::filesystem::path& dir);

inline constexpr const char* kEngineVersion = "0.1.0";
inline constexpr const char* kManifestSchema = "trustmesh-run-manifest";

}  // namespace trustmesh
