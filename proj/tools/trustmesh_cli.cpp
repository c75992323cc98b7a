#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trustmesh/config.hpp"
#include "trustmesh/discovery.hpp"
#include "trustmesh/engine.hpp"
#include "trustmesh/errors.hpp"
#include "trustmesh/ingestion.hpp"
#include "trustmesh/serde.hpp"
#include "trustmesh/sim.hpp"
#include "trustmesh/storage.hpp"
#include "trustmesh/update.hpp"

namespace fs = std::filesystem;
using namespace trustmesh;

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read " + path);
    return in;
}

GlobalConfig effective_config(const std::string& path) {
    return path.empty() ? default_global_config() : load_global_config(path);
}

/// Evidence as the CLI assembles it: feedback and recommender bookkeeping
/// from the private store, recommendations from the shared ledger.
Evidence gather_evidence(const std::string& store_path, const std::string& ledger_path) {
    Evidence evidence;
    if (!store_path.empty()) {
        const PrivateStore store = load_private_store(store_path);
        evidence.feedback = store.feedback_log;
        evidence.recommender_ledger = store.recommender_ledger;
    }
    if (!ledger_path.empty()) {
        const SharedLedger ledger = load_shared_ledger(ledger_path);
        evidence.recommendations = ledger.recommendations();
    }
    return evidence;
}

struct IngestArgs {
    std::vector<std::string> catalog, interactions, recommendations, sla;
    std::vector<std::string> conn, notice, weird, stats;
};

int run_ingest(const IngestArgs& args, const GlobalConfig& config) {
    std::size_t error_count = 0;
    const auto report = [&](const std::string& path, const char* what,
                            std::size_t records, const std::vector<LineError>& errors) {
        std::cout << path << ": " << records << " " << what
                  << (records == 1 ? " record" : " records") << "\n";
        if (!errors.empty()) {
            std::cerr << path << ":\n" << format_line_errors(errors) << "\n";
            error_count += errors.size();
        }
    };
    const auto jsonl = [&](const std::vector<std::string>& paths, const char* what,
                           auto parser) {
        for (const std::string& path : paths) {
            std::ifstream in = open_input(path);
            const auto outcome = parser(in);
            report(path, what, outcome.records.size(), outcome.errors);
        }
    };
    jsonl(args.catalog, "offer", [](std::istream& in) { return parse_catalog(in); });
    jsonl(args.interactions, "interaction",
          [](std::istream& in) { return parse_interactions(in); });
    jsonl(args.recommendations, "recommendation",
          [](std::istream& in) { return parse_recommendations(in); });
    jsonl(args.sla, "sla event", [](std::istream& in) { return ingest_sla_events(in); });

    const auto zeek = [&](const std::vector<std::string>& paths, LogKind kind,
                          const char* what) {
        for (const std::string& path : paths) {
            std::ifstream in = open_input(path);
            const auto outcome =
                parse_zeek_log(in, kind, config.address_map, config.notice_severities);
            report(path, what, outcome.records.size(), outcome.errors);
        }
    };
    zeek(args.conn, LogKind::Conn, "conn");
    zeek(args.notice, LogKind::Notice, "notice");
    zeek(args.weird, LogKind::Weird, "weird");
    zeek(args.stats, LogKind::Stats, "stats");

    if (error_count > 0) {
        std::cerr << error_count << (error_count == 1 ? " line error\n" : " line errors\n");
        return 2;
    }
    return 0;
}

struct ScoreArgs {
    std::string trustor, target;
    std::string asset;
    std::string store_path, ledger_path;
    double now = 0.0;
};

int run_score(const ScoreArgs& args, const GlobalConfig& config) {
    const Evidence evidence = gather_evidence(args.store_path, args.ledger_path);
    std::optional<AssetType> asset;
    if (!args.asset.empty()) asset = parse_asset_type(args.asset);
    const TrustState state =
        score_target(args.trustor, args.target, asset, evidence, config.engine, args.now);
    std::cout << render_trust_state_line(state) << "\n";
    return 0;
}

struct RankArgs {
    std::string trustor;
    std::string catalog_path;
    std::string store_path, ledger_path;
    std::vector<std::string> assets, locations;
    std::optional<double> max_price;
    std::optional<double> w_price, w_proximity, w_performance;
    std::string near;
    double now = 0.0;
    std::string out_dir;
};

int run_rank(const RankArgs& args, const GlobalConfig& config) {
    std::ifstream in = open_input(args.catalog_path);
    const ParseOutcome<ProductOffer> catalog = parse_catalog(in);
    if (!catalog.errors.empty()) {
        std::cerr << args.catalog_path << ":\n"
                  << format_line_errors(catalog.errors) << "\n";
        return 2;
    }

    ConstraintFilter filter;
    if (!args.assets.empty()) {
        filter.asset_types.emplace();
        for (const std::string& name : args.assets)
            filter.asset_types->insert(parse_asset_type(name));
    }
    if (!args.locations.empty())
        filter.locations.emplace(args.locations.begin(), args.locations.end());
    filter.max_price = args.max_price;

    IntentPriorities priorities = config.discovery;
    if (args.w_price) priorities.weights["price"] = *args.w_price;
    if (args.w_proximity) priorities.weights["proximity"] = *args.w_proximity;
    if (args.w_performance) priorities.weights["performance"] = *args.w_performance;
    if (!args.near.empty()) priorities.reference_location = args.near;
    priorities.validate();

    const Evidence evidence = gather_evidence(args.store_path, args.ledger_path);
    const std::vector<ProductOffer> candidates =
        prefilter(catalog.records, filter, args.now);
    const std::vector<RankedOffer> ranking = rank_offers(
        args.trustor, candidates, evidence, priorities, config.engine, args.now);

    if (args.out_dir.empty()) {
        write_ranking_csv(ranking, std::cout);
    } else {
        fs::create_directories(args.out_dir);
        std::ofstream out(fs::path(args.out_dir) / "ranking.csv", std::ios::trunc);
        if (!out) throw StorageError("cannot write " + args.out_dir + "/ranking.csv");
        write_ranking_csv(ranking, out);
    }
    return 0;
}

struct ReplayArgs {
    std::string trustor, trustee;
    double old_score = 0.5;
    std::vector<std::string> conn, notice, weird, stats;
};

int run_replay(const ReplayArgs& args, const GlobalConfig& config) {
    std::vector<SecurityLogRecord> records;
    std::size_t error_count = 0;
    const auto take = [&](const std::vector<std::string>& paths, LogKind kind) {
        for (const std::string& path : paths) {
            std::ifstream in = open_input(path);
            auto outcome =
                parse_zeek_log(in, kind, config.address_map, config.notice_severities);
            if (!outcome.errors.empty()) {
                std::cerr << path << ":\n" << format_line_errors(outcome.errors) << "\n";
                error_count += outcome.errors.size();
            }
            records.insert(records.end(), outcome.records.begin(), outcome.records.end());
        }
    };
    take(args.conn, LogKind::Conn);
    take(args.notice, LogKind::Notice);
    take(args.weird, LogKind::Weird);
    take(args.stats, LogKind::Stats);
    if (error_count > 0) return 2;

    std::map<std::int64_t, std::vector<SecurityLogRecord>> by_window;
    for (const SecurityLogRecord& record : records)
        by_window[window_of(record.timestamp, config.update)].push_back(record);

    TrustState state;
    state.trustor_id = args.trustor;
    state.trustee_id = args.trustee;
    state.score = args.old_score;

    std::vector<TrajectoryPoint> trail;
    for (const auto& [window, window_records] : by_window) {
        const UpdateCycleResult cycle =
            run_update_cycle(state, window_records, window, config.update);
        trail.push_back({window, args.trustor, args.trustee, cycle.rp, cycle.old_score,
                         cycle.state.score});
        state = cycle.state;
    }
    write_metrics_csv(trail, std::cout);
    return 0;
}

struct SimulateArgs {
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool parallel = false;
    bool sweep = false;
};

int run_simulate(const SimulateArgs& args, const GlobalConfig& config) {
    ScenarioConfig scenario = config.scenario;
    if (args.seed) scenario.seed = *args.seed;
    if (args.parallel) scenario.parallel = true;

    const ScenarioResult result = run_scenario(scenario);
    write_scenario_outputs(result, args.out_dir);

    if (args.sweep) {
        const SweepResult sweep = run_sweep(scenario);
        std::ofstream out(fs::path(args.out_dir) / "resilience.csv", std::ios::trunc);
        if (!out) throw StorageError("cannot write " + args.out_dir + "/resilience.csv");
        write_sweep_csv(sweep, out);
    }
    std::cout << "wrote " << args.out_dir << " (config " << result.config_hash << ")\n";
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"trust-based offer discovery, ranking and continuous trust updates"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    app.add_option("--config", config_path, "global configuration file (JSON)");

    IngestArgs ingest;
    CLI::App* cmd_ingest =
        app.add_subcommand("ingest", "parse and validate input files, report errors");
    cmd_ingest->add_option("--catalog", ingest.catalog, "offer catalog JSONL file");
    cmd_ingest->add_option("--interactions", ingest.interactions,
                           "interaction JSONL file");
    cmd_ingest->add_option("--recommendations", ingest.recommendations,
                           "recommendation JSONL file");
    cmd_ingest->add_option("--sla", ingest.sla, "SLA event JSONL file");
    cmd_ingest->add_option("--conn", ingest.conn, "Zeek conn log");
    cmd_ingest->add_option("--notice", ingest.notice, "Zeek notice log");
    cmd_ingest->add_option("--weird", ingest.weird, "Zeek weird log");
    cmd_ingest->add_option("--stats", ingest.stats, "Zeek stats log");

    ScoreArgs score;
    CLI::App* cmd_score =
        app.add_subcommand("score", "compute one trust state and print it");
    cmd_score->add_option("trustor", score.trustor, "scoring stakeholder")->required();
    cmd_score->add_option("target", score.target, "scored stakeholder")->required();
    cmd_score->add_option("--asset", score.asset, "asset type the intent is about");
    cmd_score->add_option("--store", score.store_path, "private store file");
    cmd_score->add_option("--ledger", score.ledger_path, "shared ledger file");
    cmd_score->add_option("--now", score.now, "evaluation time (seconds)");

    RankArgs rank;
    CLI::App* cmd_rank = app.add_subcommand("rank", "filter and rank a catalog");
    cmd_rank->add_option("--trustor", rank.trustor, "scoring stakeholder")->required();
    cmd_rank->add_option("--catalog", rank.catalog_path, "offer catalog JSONL file")
        ->required();
    cmd_rank->add_option("--store", rank.store_path, "private store file");
    cmd_rank->add_option("--ledger", rank.ledger_path, "shared ledger file");
    cmd_rank->add_option("--asset", rank.assets, "keep only these asset types");
    cmd_rank->add_option("--location", rank.locations, "keep only these locations");
    cmd_rank->add_option("--max-price", rank.max_price, "keep offers at or below");
    cmd_rank->add_option("--w-price", rank.w_price, "price criterion weight");
    cmd_rank->add_option("--w-proximity", rank.w_proximity, "proximity criterion weight");
    cmd_rank->add_option("--w-performance", rank.w_performance,
                         "performance criterion weight");
    cmd_rank->add_option("--near", rank.near, "reference location for proximity");
    cmd_rank->add_option("--now", rank.now, "evaluation time (seconds)");
    cmd_rank->add_option("--out", rank.out_dir, "output directory (default: stdout)");

    ReplayArgs replay;
    CLI::App* cmd_replay = app.add_subcommand(
        "replay-logs", "replay monitoring logs as per-window trust updates");
    cmd_replay->add_option("--trustor", replay.trustor, "monitoring stakeholder")
        ->required();
    cmd_replay->add_option("--trustee", replay.trustee, "monitored stakeholder")
        ->required();
    cmd_replay->add_option("--old", replay.old_score, "starting score")
        ->check(CLI::Range(0.0, 1.0));
    cmd_replay->add_option("--conn", replay.conn, "Zeek conn log");
    cmd_replay->add_option("--notice", replay.notice, "Zeek notice log");
    cmd_replay->add_option("--weird", replay.weird, "Zeek weird log");
    cmd_replay->add_option("--stats", replay.stats, "Zeek stats log");

    SimulateArgs simulate;
    CLI::App* cmd_simulate =
        app.add_subcommand("simulate", "run the configured scenario end to end");
    cmd_simulate->add_option("--out", simulate.out_dir, "output directory")->required();
    cmd_simulate->add_option("--seed", simulate.seed, "override the scenario seed");
    cmd_simulate->add_flag("--parallel", simulate.parallel,
                           "parallelize per-candidate scoring");
    cmd_simulate->add_flag("--sweep", simulate.sweep,
                           "also run the bad-mouthing resilience sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const GlobalConfig config = effective_config(config_path);
    if (app.got_subcommand(cmd_ingest)) return run_ingest(ingest, config);
    if (app.got_subcommand(cmd_score)) return run_score(score, config);
    if (app.got_subcommand(cmd_rank)) return run_rank(rank, config);
    if (app.got_subcommand(cmd_replay)) return run_replay(replay, config);
    if (app.got_subcommand(cmd_simulate)) return run_simulate(simulate, config);
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
