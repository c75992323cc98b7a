#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "trustmesh/config.hpp"
#include "trustmesh/engine.hpp"
#include "trustmesh/errors.hpp"
#include "trustmesh/sim.hpp"
#include "trustmesh/update.hpp"

namespace py = pybind11;
using namespace trustmesh;

namespace {

/// Run the scenario embedded in a global configuration document and return
/// every output file as text, keyed by file name.
std::map<std::string, std::string> scenario_outputs(const std::string& config_json) {
    const GlobalConfig config = parse_global_config(config_json);
    const ScenarioResult result = run_scenario(config.scenario);
    std::map<std::string, std::string> files;
    {
        std::ostringstream out;
        write_metrics_csv(result.metrics, out);
        files["metrics.csv"] = out.str();
    }
    {
        std::ostringstream out;
        write_ranking_csv(result.final_ranking, out);
        files["ranking.csv"] = out.str();
    }
    {
        std::ostringstream out;
        write_trajectories_jsonl(result, out);
        files["trajectories.jsonl"] = out.str();
    }
    {
        std::ostringstream out;
        write_run_manifest(result, out);
        files["run-manifest.json"] = out.str();
    }
    return files;
}

}  // namespace

PYBIND11_MODULE(trustmesh, m) {
    m.doc() = "trust engine for a simulated decentralized service marketplace";

    // base first: translators run newest-first, so the derived class must be
    // registered after its base to win the match
    auto engine_error = py::register_exception<Error>(m, "EngineError");
    py::register_exception<ConfigError>(m, "ConfigError", engine_error.ptr());

    py::enum_<AssetType>(m, "AssetType")
        .value("RAN", AssetType::Ran)
        .value("SPECTRUM", AssetType::Spectrum)
        .value("VNF", AssetType::Vnf)
        .value("CNF", AssetType::Cnf)
        .value("SLICE", AssetType::Slice)
        .value("NETWORK_SERVICE", AssetType::NetworkService)
        .value("CLOUD", AssetType::Cloud)
        .value("EDGE", AssetType::Edge);

    py::class_<EngineConfig>(m, "EngineConfig")
        .def(py::init<>())
        .def_readwrite("alpha_direct", &EngineConfig::alpha_direct)
        .def_readwrite("alpha_confidence", &EngineConfig::alpha_confidence)
        .def_readwrite("provider_offer_blend", &EngineConfig::provider_offer_blend)
        .def_readwrite("tf_decay", &EngineConfig::tf_decay)
        .def_readwrite("tf_window_cap", &EngineConfig::tf_window_cap)
        .def_readwrite("tf_window_count", &EngineConfig::tf_window_count)
        .def_readwrite("rt_learning_rate", &EngineConfig::rt_learning_rate)
        .def_readwrite("bootstrap_trust", &EngineConfig::bootstrap_trust);

    py::class_<FeedbackRecord>(m, "FeedbackRecord")
        .def(py::init<>())
        .def_readwrite("source_id", &FeedbackRecord::source_id)
        .def_readwrite("target_id", &FeedbackRecord::target_id)
        .def_readwrite("offer_asset_type", &FeedbackRecord::offer_asset_type)
        .def_readwrite("satisfaction", &FeedbackRecord::satisfaction)
        .def_readwrite("window_index", &FeedbackRecord::window_index)
        .def_readwrite("timestamp", &FeedbackRecord::timestamp);

    py::class_<Recommendation>(m, "Recommendation")
        .def(py::init<>())
        .def_readwrite("recommender_id", &Recommendation::recommender_id)
        .def_readwrite("target_id", &Recommendation::target_id)
        .def_readwrite("value", &Recommendation::value)
        .def_readwrite("timestamp", &Recommendation::timestamp);

    py::class_<RecommenderLedgerEntry>(m, "RecommenderLedgerEntry")
        .def(py::init<>())
        .def_readwrite("recommender_id", &RecommenderLedgerEntry::recommender_id)
        .def_readwrite("last_trust", &RecommenderLedgerEntry::last_trust)
        .def_readwrite("recommendation_trust",
                       &RecommenderLedgerEntry::recommendation_trust);

    py::class_<TrustState>(m, "TrustState")
        .def(py::init<>())
        .def_readwrite("trustor_id", &TrustState::trustor_id)
        .def_readwrite("trustee_id", &TrustState::trustee_id)
        .def_readwrite("score", &TrustState::score)
        .def_readwrite("direct_component", &TrustState::direct_component)
        .def_readwrite("community_component", &TrustState::community_component)
        .def_readwrite("evidence_interactions", &TrustState::evidence_interactions)
        .def_readwrite("provisional", &TrustState::provisional)
        .def_readwrite("updated_at", &TrustState::updated_at);

    py::class_<Evidence>(m, "Evidence")
        .def(py::init<>())
        .def_readwrite("feedback", &Evidence::feedback)
        .def_readwrite("recommendations", &Evidence::recommendations)
        .def_readwrite("recommender_ledger", &Evidence::recommender_ledger)
        .def_readwrite("current_window", &Evidence::current_window);

    m.def(
        "satisfaction",
        [](const StakeholderId& target, std::optional<AssetType> asset,
           const std::vector<FeedbackRecord>& feedback, const EngineConfig& config) {
            return satisfaction(target, asset, feedback, config);
        },
        py::arg("target"), py::arg("asset_type"), py::arg("feedback"),
        py::arg("config") = EngineConfig{});

    m.def(
        "psm_similarity",
        [](const std::vector<FeedbackRecord>& self_feedback,
           const std::vector<FeedbackRecord>& peer_feedback) {
            return psm_similarity(self_feedback, peer_feedback);
        },
        py::arg("self_feedback"), py::arg("peer_feedback"));

    m.def(
        "transaction_factor",
        [](const std::vector<std::int64_t>& counts, const EngineConfig& config) {
            return transaction_factor(counts, config);
        },
        py::arg("feedback_counts_per_window"), py::arg("config") = EngineConfig{});

    m.def("confidence", &confidence, py::arg("entry"), py::arg("recommendation"),
          py::arg("config") = EngineConfig{});

    m.def(
        "community_factor",
        [](const StakeholderId& target, const std::vector<Recommendation>& recs,
           const std::map<StakeholderId, RecommenderLedgerEntry>& ledger,
           std::int64_t published_recs, std::int64_t interactions_of_target,
           const EngineConfig& config) {
            return community_factor(target, recs, ledger, published_recs,
                                    interactions_of_target, config);
        },
        py::arg("target"), py::arg("recommendations"), py::arg("ledger"),
        py::arg("published_recs"), py::arg("interactions_of_target"),
        py::arg("config") = EngineConfig{});

    m.def("compose_trust", &compose_trust, py::arg("direct"), py::arg("community"),
          py::arg("config") = EngineConfig{});

    m.def("score_target", &score_target, py::arg("trustor"), py::arg("target"),
          py::arg("asset_type"), py::arg("evidence"), py::arg("config") = EngineConfig{},
          py::arg("now") = 0.0);

    m.def("update_recommendation_trust", &update_recommendation_trust, py::arg("entry"),
          py::arg("rec_value"), py::arg("realized_satisfaction"),
          py::arg("config") = EngineConfig{});

    m.def("apply_update", &apply_update, py::arg("old_score"), py::arg("rp"));

    m.def("scenario_outputs", &scenario_outputs, py::arg("config_json"),
          "Run the scenario from a global configuration document; returns the "
          "output files as {name: text}.");

    m.attr("ENGINE_VERSION") = kEngineVersion;
}
