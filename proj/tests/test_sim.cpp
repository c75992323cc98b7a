#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "trustmesh/errors.hpp"
#include "trustmesh/sim.hpp"

using namespace trustmesh;

namespace {

ScenarioConfig small_scenario(std::uint64_t seed = 42) {
    ScenarioConfig s;
    s.seed = seed;
    s.domains = 3;
    s.providers_per_domain = 2;
    s.offers_per_provider = 1;
    s.windows = 4;
    s.history_rounds = 3;
    return s;
}

ScenarioConfig attack_scenario(std::uint64_t seed) {
    ScenarioConfig s;
    s.seed = seed;
    s.domains = 11;
    s.providers_per_domain = 1;
    s.offers_per_provider = 1;
    s.honest_recommender_fraction = 0.7;
    s.bad_mouther_fraction = 0.3;
    s.bad_mouther_target = "d1.p0";
    s.selected_offer = "d1.p0.o0";
    s.quality_overrides = {{"d1.p0", 0.9}};
    s.windows = 6;
    s.history_rounds = 8;
    s.engine.alpha_direct = 0.35;
    s.engine.alpha_confidence = 0.2;
    s.engine.tf_window_cap = 1;
    return s;
}

std::string render_metrics(const ScenarioResult& r) {
    std::ostringstream out;
    write_metrics_csv(r.metrics, out);
    return out.str();
}

std::string render_all(const ScenarioResult& r) {
    std::ostringstream out;
    write_metrics_csv(r.metrics, out);
    write_ranking_csv(r.final_ranking, out);
    write_trajectories_jsonl(r, out);
    write_run_manifest(r, out);
    return out.str();
}

}  // namespace

TEST_CASE("generate_scenario is deterministic") {
    const ScenarioConfig cfg = small_scenario();
    const GeneratedScenario a = generate_scenario(cfg);
    const GeneratedScenario b = generate_scenario(cfg);

    CHECK(a.trustor == "d0.op");
    CHECK(a.offers == b.offers);
    CHECK(a.ledger.interactions() == b.ledger.interactions());
    CHECK(a.ledger.recommendations() == b.ledger.recommendations());
    CHECK(a.store.feedback_log == b.store.feedback_log);
    CHECK(a.store.recommender_ledger == b.store.recommender_ledger);
    CHECK(a.event_traces == b.event_traces);

    // 3 domains x 2 providers x 1 offer
    CHECK(a.offers.size() == 6);
    // trustor records feedback for every provider every round
    CHECK(a.store.feedback_log.size() == 6 * 3);
    // per-provider traces cover every monitored window
    REQUIRE(a.event_traces.size() == 6);
    for (const auto& [provider, traces] : a.event_traces)
        CHECK(traces.size() == 4);

    const GeneratedScenario other = generate_scenario(small_scenario(43));
    CHECK(other.ledger.recommendations() != a.ledger.recommendations());
}

TEST_CASE("honest recommenders stay near the latent quality") {
    ScenarioConfig cfg = small_scenario();
    cfg.honest_recommender_fraction = 1.0;
    cfg.bad_mouther_fraction = 0.0;
    cfg.quality_overrides = {{"d1.p0", 0.9}, {"d2.p1", 0.4}};

    const GeneratedScenario gen = generate_scenario(cfg);
    CHECK_FALSE(gen.ledger.recommendations().empty());
    for (const Recommendation& rec : gen.ledger.recommendations()) {
        double quality = 0.0;
        if (auto it = cfg.quality_overrides.find(rec.target_id);
            it != cfg.quality_overrides.end()) {
            quality = it->second;
            CHECK(std::fabs(rec.value - quality) <= 0.1 + 1e-12);
        }
        CHECK(rec.value >= 0.0);
        CHECK(rec.value <= 1.0);
    }
}

TEST_CASE("bad-mouthers slander exactly the victim") {
    ScenarioConfig cfg = attack_scenario(42);
    const GeneratedScenario gen = generate_scenario(cfg);
    REQUIRE(gen.victim.has_value());
    CHECK(*gen.victim == "d1.p0");

    std::set<StakeholderId> slanderers;
    for (const Recommendation& rec : gen.ledger.recommendations()) {
        if (rec.value < 0.1) {
            CHECK(rec.target_id == "d1.p0");
            slanderers.insert(rec.recommender_id);
        }
    }
    // floor(0.3 * 10 recommenders) = 3 attackers
    CHECK(slanderers.size() == 3);
    // attackers stay plausible about everyone else
    for (const Recommendation& rec : gen.ledger.recommendations())
        if (slanderers.count(rec.recommender_id) && rec.target_id != "d1.p0")
            CHECK(rec.value >= 0.1);
}

TEST_CASE("run_scenario shape") {
    const ScenarioConfig cfg = small_scenario();
    const ScenarioResult r = run_scenario(cfg);

    CHECK(r.config_hash.size() == 16);
    CHECK(r.offers.size() == 6);
    CHECK(r.initial_ranking.size() == 6);
    CHECK(r.final_ranking.size() == 6);
    CHECK(r.directive.trustor_id == "d0.op");
    CHECK(r.directive.offer_id == r.initial_ranking[0].offer.offer_id);

    // one trajectory for the monitored provider: windows + 1 scores
    REQUIRE(r.trajectories.size() == 1);
    const auto& [pair, scores] = *r.trajectories.begin();
    CHECK(pair.first == "d0.op");
    CHECK(pair.second == r.directive.provider_id);
    CHECK(scores.size() == static_cast<std::size_t>(cfg.windows) + 1);

    // one metrics row per monitored window, numbered locally from 1
    REQUIRE(r.metrics.size() == static_cast<std::size_t>(cfg.windows));
    for (std::size_t i = 0; i < r.metrics.size(); ++i) {
        CHECK(r.metrics[i].window == static_cast<std::int64_t>(i) + 1);
        CHECK(r.metrics[i].trustee_id == r.directive.provider_id);
        CHECK(r.metrics[i].old_score == doctest::Approx(scores[i]));
        CHECK(r.metrics[i].new_score == doctest::Approx(scores[i + 1]));
        CHECK(r.metrics[i].rp >= 0.0);
        CHECK(r.metrics[i].rp <= 1.0);
    }

    // the trustor's store holds a state for every provider
    CHECK(r.store.domain_id == "d0.op");
    CHECK(r.store.trust_states.size() == 6);
}

TEST_CASE("scenario runs are reproducible") {
    const ScenarioConfig cfg = small_scenario();
    const ScenarioResult a = run_scenario(cfg);
    const ScenarioResult b = run_scenario(cfg);
    CHECK(render_all(a) == render_all(b));
    CHECK(a.config_hash == b.config_hash);

    ScenarioConfig reseeded = cfg;
    reseeded.seed = 1234;
    const ScenarioResult c = run_scenario(reseeded);
    CHECK(render_metrics(a) != render_metrics(c));
    CHECK(a.config_hash != c.config_hash);
}

TEST_CASE("parallel scoring changes nothing observable") {
    ScenarioConfig cfg = small_scenario();
    const ScenarioResult serial = run_scenario(cfg);
    cfg.parallel = true;
    const ScenarioResult parallel = run_scenario(cfg);
    CHECK(render_all(serial) == render_all(parallel));
    CHECK(serial.config_hash == parallel.config_hash);
}

TEST_CASE("a pristine solo provider never loses trust") {
    ScenarioConfig cfg;
    cfg.seed = 7;
    cfg.domains = 2;
    cfg.providers_per_domain = 1;
    cfg.offers_per_provider = 1;
    cfg.windows = 5;
    cfg.history_rounds = 2;
    cfg.quality_overrides = {{"d0.p0", 0.95}, {"d1.p0", 0.95}};

    const ScenarioResult r = run_scenario(cfg);
    const auto& scores = r.trajectories.begin()->second;
    REQUIRE(scores.size() == 6);
    for (std::size_t i = 1; i < scores.size(); ++i) CHECK(scores[i] >= scores[i - 1]);
    for (const TrajectoryPoint& m : r.metrics) CHECK(m.rp == doctest::Approx(1.0));
}

TEST_CASE("a scheduled severe incident dents the trajectory") {
    ScenarioConfig cfg;
    cfg.seed = 7;
    cfg.domains = 2;
    cfg.providers_per_domain = 1;
    cfg.offers_per_provider = 1;
    cfg.windows = 5;
    cfg.history_rounds = 2;
    cfg.quality_overrides = {{"d0.p0", 0.95}, {"d1.p0", 0.95}};
    cfg.selected_offer = "d1.p0.o0";
    cfg.incident_schedule = {{2, "d1.p0", "severe"}};

    const ScenarioResult r = run_scenario(cfg);
    const auto& scores = r.trajectories.at({"d0.op", "d1.p0"});
    REQUIRE(scores.size() == 6);
    CHECK(scores[2] < scores[1]);   // the incident window strictly decreases
    CHECK(scores[3] >= scores[2]);  // clean windows afterwards recover
    CHECK(r.metrics[1].rp == doctest::Approx(0.0));
}

TEST_CASE("unknown selected_offer is a config error") {
    ScenarioConfig cfg = small_scenario();
    cfg.selected_offer = "d9.p9.o9";
    CHECK_THROWS_WITH_AS(run_scenario(cfg), doctest::Contains("d9.p9.o9"), ConfigError);
}

TEST_CASE("victim bookkeeping under attack") {
    const ScenarioConfig cfg = attack_scenario(1);
    const ScenarioResult r = run_scenario(cfg);
    REQUIRE(r.victim_id.has_value());
    CHECK(*r.victim_id == "d1.p0");
    CHECK(r.victim_rank >= 1);
    CHECK(r.victim_baseline_rank >= 1);

    std::ostringstream out;
    write_trajectories_jsonl(r, out);
    CHECK(out.str().find("\"kind\":\"displacement\"") != std::string::npos);
    CHECK(out.str().find("\"victim\":\"d1.p0\"") != std::string::npos);
}

TEST_CASE("manifest names the run") {
    const ScenarioResult r = run_scenario(small_scenario());
    std::ostringstream out;
    write_run_manifest(r, out);
    const std::string manifest = out.str();
    CHECK(manifest.find("\"schema\":\"trustmesh-run-manifest\"") != std::string::npos);
    CHECK(manifest.find("\"engine_version\":\"0.1.0\"") != std::string::npos);
    CHECK(manifest.find("\"config_hash\":\"" + r.config_hash + "\"") != std::string::npos);
    CHECK(manifest.find("\"seed\":42") != std::string::npos);
    CHECK(manifest.find("\"offers\":6") != std::string::npos);
}

TEST_CASE("metrics csv layout") {
    const ScenarioResult r = run_scenario(small_scenario());
    std::istringstream in(render_metrics(r));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "window,trustor,trustee,rp,old_score,new_score");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(line.rfind(std::to_string(rows) + ",", 0) == 0);
    }
    CHECK(rows == r.metrics.size());
}

TEST_CASE("sweep covers every attacker count") {
    ScenarioConfig cfg = attack_scenario(3);
    cfg.windows = 4;
    cfg.history_rounds = 4;
    const SweepResult sweep = run_sweep(cfg);

    // 10 recommenders outside the trustor's domain
    REQUIRE(sweep.points.size() == 11);
    for (int k = 0; k <= 10; ++k) {
        const SweepPoint& p = sweep.points[static_cast<std::size_t>(k)];
        CHECK(p.bad_mouthers == k);
        CHECK(p.fraction == doctest::Approx(k / 10.0));
        CHECK(p.victim_rank >= 1);
        CHECK(p.baseline_rank >= 1);
        CHECK(p.preserved == (p.victim_rank == p.baseline_rank));
    }
    CHECK(sweep.points[0].preserved);

    if (sweep.first_failing_fraction) {
        bool found = false;
        for (const SweepPoint& p : sweep.points)
            if (!p.preserved && p.fraction == doctest::Approx(*sweep.first_failing_fraction)) {
                found = true;
                break;
            }
        CHECK(found);
    } else {
        for (const SweepPoint& p : sweep.points) CHECK(p.preserved);
    }

    std::ostringstream out;
    write_sweep_csv(sweep, out);
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "bad_mouthers,fraction,victim_rank,baseline_rank,preserved");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == sweep.points.size());
}

TEST_CASE("sweep needs a second domain") {
    ScenarioConfig cfg = small_scenario();
    cfg.domains = 1;
    CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
}
