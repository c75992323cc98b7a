#include "trustmesh/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <thread>

#include "json_util.hpp"
#include "trustmesh/errors.hpp"
#include "trustmesh/rng.hpp"
#include "trustmesh/update.hpp"

namespace trustmesh {

namespace {

using detail::double_to_string;
using detail::json;

double clamp_unit(double v) { return std::min(1.0, std::max(0.0, v)); }

/// Lazily created named random streams; a stream's draws depend only on
/// (seed, label) and how often that stream was used before.
class Streams {
  public:
    explicit Streams(std::uint64_t seed) : seed_(seed) {}

    Rng& get(const std::string& label) {
        auto it = rngs_.find(label);
        if (it == rngs_.end()) it = rngs_.emplace(label, Rng(seed_, label)).first;
        return it->second;
    }

  private:
    std::uint64_t seed_;
    std::map<std::string, Rng> rngs_;
};

std::string domain_name(std::int64_t i) { return "d" + std::to_string(i); }

struct World {
    std::vector<StakeholderId> consumers;
    std::vector<StakeholderId> providers;
    std::map<StakeholderId, double> quality;
    std::vector<ProductOffer> offers;
    std::map<StakeholderId, std::vector<std::size_t>> offers_of;  // provider -> offer indexes
    StakeholderId trustor;
    std::vector<StakeholderId> recommenders;
    std::set<StakeholderId> bad_mouthers;
    std::set<StakeholderId> publishers;  // bad-mouthers + honest recommenders
    StakeholderId victim;
};

AssetType pick_asset(const ScenarioConfig& cfg, Rng& rng) {
    if (cfg.asset_mix.empty())
        return kAllAssetTypes[rng.below(std::size(kAllAssetTypes))];
    double total = 0.0;
    for (const auto& [type, weight] : cfg.asset_mix) total += weight;
    double roll = rng.uniform() * total;
    for (const auto& [type, weight] : cfg.asset_mix) {
        roll -= weight;
        if (roll < 0.0) return type;
    }
    return cfg.asset_mix.rbegin()->first;
}

World build_world(const ScenarioConfig& cfg, Streams& streams) {
    World world;
    for (std::int64_t i = 0; i < cfg.domains; ++i) {
        const std::string domain = domain_name(i);
        world.consumers.push_back(domain + ".op");
        for (std::int64_t k = 0; k < cfg.providers_per_domain; ++k) {
            const StakeholderId pid = domain + ".p" + std::to_string(k);
            world.providers.push_back(pid);
            auto it = cfg.quality_overrides.find(pid);
            world.quality[pid] = it != cfg.quality_overrides.end()
                                     ? it->second
                                     : streams.get("quality:" + pid)
                                           .uniform(cfg.quality_min, cfg.quality_max);
            for (std::int64_t j = 0; j < cfg.offers_per_provider; ++j) {
                ProductOffer offer;
                offer.offer_id = pid + ".o" + std::to_string(j);
                offer.provider_id = pid;
                offer.asset_type = pick_asset(cfg, streams.get("offer:" + offer.offer_id));
                offer.location = domain;
                offer.price = streams.get("price:" + offer.offer_id).uniform(10.0, 100.0);
                offer.published_at = 0.0;
                world.offers_of[pid].push_back(world.offers.size());
                world.offers.push_back(std::move(offer));
            }
        }
    }
    world.trustor = world.consumers.front();
    world.recommenders.assign(world.consumers.begin() + 1, world.consumers.end());

    // role assignment: floor rule, then a seeded shuffle decides who is who
    const std::int64_t n = static_cast<std::int64_t>(world.recommenders.size());
    const auto count = [n](double fraction) {
        return static_cast<std::int64_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
    };
    const std::int64_t bad = count(cfg.bad_mouther_fraction);
    const std::int64_t honest = std::min(n - bad, count(cfg.honest_recommender_fraction));
    std::vector<StakeholderId> order = world.recommenders;
    Rng& roles = streams.get("roles");
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[roles.below(i)]);
    for (std::int64_t i = 0; i < bad; ++i) world.bad_mouthers.insert(order[i]);
    for (std::int64_t i = 0; i < bad + honest; ++i) world.publishers.insert(order[i]);

    if (!cfg.bad_mouther_target.empty()) {
        if (!world.quality.count(cfg.bad_mouther_target))
            throw ConfigError("scenario.bad_mouther_target: unknown provider '" +
                              cfg.bad_mouther_target + "'");
        world.victim = cfg.bad_mouther_target;
    } else if (bad > 0) {
        for (const StakeholderId& pid : world.providers)
            if (world.victim.empty() || world.quality[pid] > world.quality[world.victim])
                world.victim = pid;
    }
    return world;
}

const char* tier_of(double quality) {
    if (quality >= 0.85) return "pristine";
    if (quality >= 0.55) return "minor";
    if (quality >= 0.30) return "major";
    return "severe";
}

/// Deterministic event trace for one monitored window. Counts are fixed per
/// profile; with default update weights the profiles land on rp 1.0, 0.65,
/// 0.19 and 0.0.
std::vector<SecurityLogRecord> make_events(const std::string& profile,
                                           const StakeholderId& trustor,
                                           const StakeholderId& trustee,
                                           std::int64_t window_index,
                                           const UpdateConfig& update) {
    struct Plan {
        int conn_ok, conn_fail, notices;
        double notice_weight_sum;
        int weird;
        std::int64_t dropped;
    };
    Plan plan{};
    if (profile == "pristine")
        plan = {8, 0, 0, 0.0, 0, 0};
    else if (profile == "minor")
        plan = {4, 4, 3, 2.5, 0, 0};
    else if (profile == "major")
        plan = {0, 8, 5, 5.0, 5, 100};
    else  // severe
        plan = {0, 8, 5, 5.0, 10, 1000};

    const int total = plan.conn_ok + plan.conn_fail + plan.notices + plan.weird + 1;
    const double start = static_cast<double>(window_index) * update.window_seconds;
    const double step = update.window_seconds / static_cast<double>(total + 1);
    int slot = 0;
    auto at = [&] { return start + static_cast<double>(++slot) * step; };

    std::vector<SecurityLogRecord> events;
    for (int i = 0; i < plan.conn_ok + plan.conn_fail; ++i) {
        SecurityLogRecord r;
        r.kind = LogKind::Conn;
        r.timestamp = at();
        r.originator_id = trustor;
        r.responder_id = trustee;
        r.payload = ConnPayload{i < plan.conn_ok ? "SF" : "REJ", 512, 2048, 8, 8};
        events.push_back(std::move(r));
    }
    for (int i = 0; i < plan.notices; ++i) {
        SecurityLogRecord r;
        r.kind = LogKind::Notice;
        r.timestamp = at();
        r.originator_id = trustee;
        r.responder_id = trustor;
        const double remaining = plan.notice_weight_sum - static_cast<double>(i);
        r.payload = NoticePayload{"Scan::Port_Scan", clamp_unit(remaining)};
        events.push_back(std::move(r));
    }
    for (int i = 0; i < plan.weird; ++i) {
        SecurityLogRecord r;
        r.kind = LogKind::Weird;
        r.timestamp = at();
        r.originator_id = trustee;
        r.responder_id = trustor;
        r.payload = WeirdPayload{"bad_TCP_checksum"};
        events.push_back(std::move(r));
    }
    SecurityLogRecord stats;
    stats.kind = LogKind::Stats;
    stats.timestamp = at();
    stats.payload = StatsPayload{1000, plan.dropped};
    events.push_back(std::move(stats));
    return events;
}

/// Order-preserving map over candidates; the parallel path shards by index
/// and writes into a preallocated slot, so results are position-stable.
std::map<std::string, TrustState> score_offers(const std::vector<ProductOffer>& candidates,
                                               const StakeholderId& trustor,
                                               const Evidence& evidence,
                                               const EngineConfig& engine, double now,
                                               bool parallel) {
    std::vector<TrustState> states(candidates.size());
    auto work = [&](std::size_t i) {
        states[i] = score_target(trustor, candidates[i].provider_id,
                                 candidates[i].asset_type, evidence, engine, now);
    };
    if (parallel && candidates.size() > 1) {
        const unsigned workers =
            std::max(2u, std::min(8u, std::thread::hardware_concurrency()));
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < candidates.size(); i = next++) work(i);
            });
        for (std::thread& t : pool) t.join();
    } else {
        for (std::size_t i = 0; i < candidates.size(); ++i) work(i);
    }
    std::map<std::string, TrustState> by_offer;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        by_offer[candidates[i].offer_id] = states[i];
    return by_offer;
}

int best_rank_of(const std::vector<RankedOffer>& ranking, const StakeholderId& provider) {
    for (const RankedOffer& r : ranking)
        if (r.offer.provider_id == provider) return r.rank;
    return 0;
}

}  // namespace

GeneratedScenario generate_scenario(const ScenarioConfig& config) {
    config.validate();
    Streams streams(config.seed);
    World world = build_world(config, streams);

    GeneratedScenario gen;
    gen.trustor = world.trustor;
    gen.offers = world.offers;
    if (!world.victim.empty()) gen.victim = world.victim;
    gen.store.domain_id = world.trustor;

    const double window_seconds = config.update.window_seconds;
    std::map<std::pair<StakeholderId, StakeholderId>, double> last_rec;

    // pre-history feedback rounds, one per window
    for (std::int64_t round = 0; round < config.history_rounds; ++round) {
        const double t = (static_cast<double>(round) + 0.5) * window_seconds;
        std::map<StakeholderId, double> own_sat;
        for (const StakeholderId& consumer : world.consumers) {
            for (const StakeholderId& provider : world.providers) {
                const double sample =
                    streams.get("sat:" + consumer + ":" + provider).uniform(-0.05, 0.05);
                const double sat = clamp_unit(world.quality[provider] + sample);
                const auto& offer_indexes = world.offers_of[provider];
                const std::size_t pick =
                    offer_indexes.size() == 1
                        ? 0
                        : static_cast<std::size_t>(
                              streams.get("pick:" + consumer + ":" + provider)
                                  .below(offer_indexes.size()));
                const ProductOffer& offer = world.offers[offer_indexes[pick]];
                gen.ledger.push_interaction({consumer, provider, offer.offer_id,
                                             offer.asset_type, t, 1, sat, t});
                if (consumer == world.trustor) {
                    gen.store.append_feedback(
                        {consumer, provider, offer.asset_type, sat, round, t});
                    own_sat[provider] = sat;
                }
            }
        }
        for (const StakeholderId& rec : world.recommenders) {
            if (!world.publishers.count(rec)) continue;
            const bool lies = world.bad_mouthers.count(rec) > 0;
            for (const StakeholderId& provider : world.providers) {
                const double draw = streams.get("rec:" + rec + ":" + provider).uniform();
                const double value =
                    lies && provider == world.victim
                        ? 0.05 * draw
                        : clamp_unit(world.quality[provider] + (draw * 0.2 - 0.1));
                gen.ledger.push_recommendation({rec, provider, value, t});
                last_rec[{rec, provider}] = value;
            }
        }
        // a recommender is as trustworthy as its least accurate claim this round
        for (const StakeholderId& rec : world.recommenders) {
            if (!world.publishers.count(rec)) continue;
            const StakeholderId* worst = nullptr;
            double worst_gap = -1.0;
            for (const StakeholderId& provider : world.providers) {
                const double gap =
                    std::fabs(last_rec[{rec, provider}] - own_sat[provider]);
                if (gap > worst_gap) {
                    worst_gap = gap;
                    worst = &provider;
                }
            }
            if (!worst) continue;
            gen.store.put_ledger_entry(update_recommendation_trust(
                gen.store.ledger_entry_or_default(rec), last_rec[{rec, *worst}],
                own_sat[*worst], config.engine));
        }
    }

    // monitoring-event traces, one per provider and monitored window
    for (const StakeholderId& provider : world.providers) {
        std::vector<std::vector<SecurityLogRecord>>& traces = gen.event_traces[provider];
        for (std::int64_t w = 1; w <= config.windows; ++w) {
            std::string profile = tier_of(world.quality[provider]);
            for (const IncidentSpec& spec : config.incident_schedule)
                if (spec.window_index == w && spec.trustee_id == provider)
                    profile = spec.severity;
            traces.push_back(make_events(profile, world.trustor, provider,
                                         config.history_rounds + w - 1, config.update));
        }
    }
    return gen;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
    config.validate();
    ScenarioResult result;
    result.config = config;
    {
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(
                          fingerprint(render_scenario_config(config))));
        result.config_hash = buf;
    }

    GeneratedScenario gen = generate_scenario(config);
    result.offers = gen.offers;

    if (!config.selected_offer.empty()) {
        const bool known = std::any_of(
            gen.offers.begin(), gen.offers.end(),
            [&](const ProductOffer& o) { return o.offer_id == config.selected_offer; });
        if (!known)
            throw ConfigError("scenario.selected_offer: unknown offer '" +
                              config.selected_offer + "'");
    }

    const double window_seconds = config.update.window_seconds;

    // discovery and selection
    const double t_select = static_cast<double>(config.history_rounds) * window_seconds;
    Evidence evidence;
    evidence.feedback = gen.store.feedback_log;
    evidence.recommendations = gen.ledger.recommendations();
    evidence.recommender_ledger = gen.store.recommender_ledger;

    const std::vector<ProductOffer> candidates =
        prefilter(gen.offers, ConstraintFilter{}, t_select);
    result.initial_ranking = rank_with_scores(
        candidates,
        score_offers(candidates, gen.trustor, evidence, config.engine, t_select,
                     config.parallel),
        config.priorities);

    const std::string choice = config.selected_offer.empty()
                                   ? result.initial_ranking.front().offer.offer_id
                                   : config.selected_offer;
    result.directive =
        select_offer(result.initial_ranking, choice, gen.ledger, t_select, config.update);
    const StakeholderId trustee = result.directive.provider_id;

    TrustState monitored;
    for (const RankedOffer& r : result.initial_ranking)
        if (r.offer.offer_id == choice) monitored = r.trust;

    // latest published claim about the trustee, per recommender
    std::map<StakeholderId, double> claims;
    for (const Recommendation& rec : gen.ledger.recommendations())
        if (rec.target_id == trustee) claims[rec.recommender_id] = rec.value;

    // monitored windows
    std::vector<double> trajectory{monitored.score};
    for (std::int64_t w = 1; w <= config.windows; ++w) {
        const std::int64_t window_index = config.history_rounds + w - 1;
        const std::vector<SecurityLogRecord>& events =
            gen.event_traces.at(trustee)[static_cast<std::size_t>(w - 1)];
        const UpdateCycleResult cycle =
            run_update_cycle(monitored, events, window_index, config.update);
        result.metrics.push_back({w, gen.trustor, trustee, cycle.rp, cycle.old_score,
                                  cycle.state.score});
        trajectory.push_back(cycle.state.score);
        monitored = cycle.state;

        // realized service behavior disciplines recommendation trust
        for (const auto& [rec, value] : claims)
            gen.store.put_ledger_entry(update_recommendation_trust(
                gen.store.ledger_entry_or_default(rec), value, cycle.rp, config.engine));
    }
    result.trajectories[{gen.trustor, trustee}] = trajectory;

    // final ranking: fresh recomputation over the post-monitoring ledger
    const double t_end =
        static_cast<double>(config.history_rounds + config.windows) * window_seconds;
    evidence.recommender_ledger = gen.store.recommender_ledger;
    result.final_ranking = rank_with_scores(
        candidates,
        score_offers(candidates, gen.trustor, evidence, config.engine, t_end,
                     config.parallel),
        config.priorities);

    for (const RankedOffer& r : result.final_ranking)
        if (!gen.store.trust_states.count(r.offer.provider_id))
            gen.store.put_trust_state(r.trust);
    gen.store.put_trust_state(monitored);
    result.store = std::move(gen.store);
    result.ledger = std::move(gen.ledger);

    if (gen.victim) {
        result.victim_id = gen.victim;
        result.victim_rank = best_rank_of(result.final_ranking, *gen.victim);
        const std::int64_t recommenders = config.domains - 1;
        const std::int64_t attackers = static_cast<std::int64_t>(std::floor(
            config.bad_mouther_fraction * static_cast<double>(recommenders) + 1e-9));
        if (attackers > 0) {
            // honest-only baseline: same seed, the attackers tell the truth
            ScenarioConfig baseline = config;
            baseline.bad_mouther_fraction = 0.0;
            baseline.honest_recommender_fraction =
                std::min(1.0, config.honest_recommender_fraction +
                                  config.bad_mouther_fraction);
            baseline.bad_mouther_target = *gen.victim;
            result.victim_baseline_rank = run_scenario(baseline).victim_rank;
        } else {
            result.victim_baseline_rank = result.victim_rank;
        }
    }
    return result;
}

SweepResult run_sweep(const ScenarioConfig& base) {
    base.validate();
    if (base.domains < 2)
        throw ConfigError("scenario.domains: a sweep needs at least 2 domains");

    // resolve the victim once so every point of the sweep measures the same
    // provider
    StakeholderId victim = base.bad_mouther_target;
    if (victim.empty()) {
        Streams streams(base.seed);
        const World world = build_world(base, streams);
        for (const StakeholderId& pid : world.providers)
            if (victim.empty() || world.quality.at(pid) > world.quality.at(victim))
                victim = pid;
    }

    SweepResult result;
    const std::int64_t n = base.domains - 1;
    for (std::int64_t k = 0; k <= n; ++k) {
        ScenarioConfig cfg = base;
        cfg.bad_mouther_target = victim;
        cfg.bad_mouther_fraction =
            static_cast<double>(k) / static_cast<double>(n);
        cfg.honest_recommender_fraction = 1.0 - cfg.bad_mouther_fraction;
        const ScenarioResult r = run_scenario(cfg);
        SweepPoint point;
        point.bad_mouthers = static_cast<int>(k);
        point.fraction = cfg.bad_mouther_fraction;
        point.victim_rank = r.victim_rank;
        point.baseline_rank = r.victim_baseline_rank;
        point.preserved = r.victim_rank == r.victim_baseline_rank;
        if (!point.preserved && !result.first_failing_fraction)
            result.first_failing_fraction = point.fraction;
        result.points.push_back(point);
    }
    return result;
}

void write_metrics_csv(std::span<const TrajectoryPoint> metrics, std::ostream& out) {
    out << "window,trustor,trustee,rp,old_score,new_score\n";
    for (const TrajectoryPoint& p : metrics)
        out << p.window << ',' << p.trustor_id << ',' << p.trustee_id << ','
            << double_to_string(p.rp) << ',' << double_to_string(p.old_score) << ','
            << double_to_string(p.new_score) << '\n';
}

void write_ranking_csv(std::span<const RankedOffer> ranking, std::ostream& out) {
    out << "offer_id,provider_id,trust,intent_score,rank\n";
    for (const RankedOffer& r : ranking)
        out << r.offer.offer_id << ',' << r.offer.provider_id << ','
            << double_to_string(r.trust.score) << ',' << double_to_string(r.intent_score)
            << ',' << r.rank << '\n';
}

void write_trajectories_jsonl(const ScenarioResult& result, std::ostream& out) {
    for (const auto& [pair, scores] : result.trajectories) {
        json j{{"kind", "trajectory"},
               {"scores", scores},
               {"trustee", pair.second},
               {"trustor", pair.first}};
        out << j.dump() << '\n';
    }
    if (result.victim_id) {
        json j{{"baseline_rank", result.victim_baseline_rank},
               {"kind", "displacement"},
               {"preserved", result.victim_rank == result.victim_baseline_rank},
               {"rank", result.victim_rank},
               {"victim", *result.victim_id}};
        out << j.dump() << '\n';
    }
}

void write_run_manifest(const ScenarioResult& result, std::ostream& out) {
    json j{{"config_hash", result.config_hash},
           {"domains", result.config.domains},
           {"engine_version", kEngineVersion},
           {"offers", result.offers.size()},
           {"schema", kManifestSchema},
           {"seed", result.config.seed},
           {"windows", result.config.windows}};
    if (result.victim_id) {
        j["victim"] = *result.victim_id;
        j["victim_rank"] = result.victim_rank;
        j["victim_baseline_rank"] = result.victim_baseline_rank;
    }
    out << j.dump() << '\n';
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
    out << "bad_mouthers,fraction,victim_rank,baseline_rank,preserved\n";
    for (const SweepPoint& p : result.points)
        out << p.bad_mouthers << ',' << double_to_string(p.fraction) << ','
            << p.victim_rank << ',' << p.baseline_rank << ','
            << (p.preserved ? "true" : "false") << '\n';
}

void write_scenario_outputs(const ScenarioResult& result,
                            const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto open = [&](const char* name) {
        std::ofstream out(dir / name, std::ios::trunc);
        if (!out) throw StorageError("cannot write " + (dir / name).string());
        return out;
    };
    {
        std::ofstream out = open("metrics.csv");
        write_metrics_csv(result.metrics, out);
    }
    {
        std::ofstream out = open("ranking.csv");
        write_ranking_csv(result.final_ranking, out);
    }
    {
        std::ofstream out = open("trajectories.jsonl");
        write_trajectories_jsonl(result, out);
    }
    {
        std::ofstream out = open("run-manifest.json");
        write_run_manifest(result, out);
    }
}

}  // namespace trustmesh
