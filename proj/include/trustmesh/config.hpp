#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trustmesh/types.hpp"

namespace trustmesh {

using AddressMap = std::map<std::string, StakeholderId>;
using SeverityMap = std::map<std::string, double>;  // notice type -> weight in [0,1]

/// Knobs of the trust computation. Defaults are the documented baseline.
struct EngineConfig {
    double alpha_direct = 0.6;        // weight of direct vs community trust
    double alpha_confidence = 0.5;    // weight of recommender trust vs its recommendation
    double provider_offer_blend = 0.5;  // provider-level vs offer-level satisfaction
    double tf_decay = 0.7;            // per-window decay of feedback counts
    std::int64_t tf_window_cap = 10;  // feedback count that saturates a window
    std::int64_t tf_window_count = 4;
    double rt_learning_rate = 0.3;    // 0 freezes recommendation-trust updates
    double bootstrap_trust = 0.5;     // provisional score with zero evidence

    void validate() const;  // throws ConfigError naming the field

    bool operator==(const EngineConfig&) const = default;
};

/// Weights of the four monitoring-log dimensions; must sum to 1.
struct RpWeights {
    double conn = 0.4;
    double notice = 0.3;
    double weird = 0.2;
    double stat = 0.1;

    void validate() const;

    bool operator==(const RpWeights&) const = default;
};

struct UpdateConfig {
    double window_seconds = 300.0;
    double notice_cap = 5.0;   // summed severity that zeroes the notice dimension
    std::int64_t weird_cap = 10;
    RpWeights weights;
    std::set<std::string> conn_success_states = {"SF"};

    void validate() const;

    bool operator==(const UpdateConfig&) const = default;
};

/// Consumer priorities for intent-based discovery. Criterion weights are
/// normalized before use; recognized criteria: price, proximity, performance.
struct IntentPriorities {
    std::map<std::string, double> weights = {
        {"price", 1.0}, {"proximity", 1.0}, {"performance", 1.0}};
    std::optional<std::string> reference_location;
    std::map<std::string, double> performance_hint;  // offer_id -> [0,1]

    void validate() const;

    bool operator==(const IntentPriorities&) const = default;
};

struct IncidentSpec {
    std::int64_t window_index = 0;
    StakeholderId trustee_id;
    std::string severity;  // "minor" | "major" | "severe"

    bool operator==(const IncidentSpec&) const = default;
};

/// Everything a simulation run depends on. The seed fully determines all
/// generated randomness; engine/update/discovery settings are embedded so a
/// scenario is reproducible from this one value.
struct ScenarioConfig {
    std::uint64_t seed = 42;
    std::int64_t domains = 4;               // one consumer per domain
    std::int64_t providers_per_domain = 2;
    std::int64_t offers_per_provider = 2;
    std::map<AssetType, double> asset_mix;  // empty -> uniform over all types
    double honest_recommender_fraction = 1.0;
    double bad_mouther_fraction = 0.0;
    StakeholderId bad_mouther_target;       // victim of low-value recommendations
    std::int64_t windows = 6;               // monitored windows, one feedback round each
    std::int64_t history_rounds = 4;        // pre-selection interaction rounds
    double quality_min = 0.30;              // ground-truth quality range
    double quality_max = 0.84;
    std::map<StakeholderId, double> quality_overrides;
    std::vector<IncidentSpec> incident_schedule;
    std::string selected_offer;             // empty -> top-ranked offer
    bool parallel = false;
    EngineConfig engine;
    UpdateConfig update;
    IntentPriorities priorities;

    void validate() const;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Parsed global configuration file. Every key has a default; unknown keys
/// are rejected.
struct GlobalConfig {
    EngineConfig engine;
    UpdateConfig update;
    IntentPriorities discovery;
    AddressMap address_map;
    SeverityMap notice_severities;
    ScenarioConfig scenario;
    std::uint64_t config_hash = 0;  // fingerprint of the effective configuration

    void validate() const;
};

GlobalConfig parse_global_config(const std::string& json_text);
GlobalConfig load_global_config(const std::filesystem::path& path);

/// The defaults, with a matching fingerprint.
GlobalConfig default_global_config();

/// Canonical one-line JSON renderings (sorted keys, shortest numbers);
/// equal configs produce identical bytes. The global fingerprint is the
/// FNV-1a hash of render_global_config.
std::string render_scenario_config(const ScenarioConfig& config);
std::string render_global_config(const GlobalConfig& config);
std::uint64_t fingerprint(const std::string& text);

}  // namespace trustmesh
