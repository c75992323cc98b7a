#include "trustmesh/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json_util.hpp"
#include "trustmesh/errors.hpp"

namespace trustmesh {

namespace {

using detail::json;

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

void check_unit(double v, const std::string& field) {
    if (!(v >= 0.0 && v <= 1.0)) bad(field + ": must be within [0,1]");
}

json parse_root(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) bad("config: not valid JSON");
    if (!j.is_object()) bad("config: expected a JSON object");
    return j;
}

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) bad(where + ": unknown key '" + it.key() + "'");
}

const json* find(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double num(const json& j, const char* key, double fallback, const std::string& where) {
    const json* v = find(j, key);
    if (!v) return fallback;
    if (!v->is_number()) bad(where + "." + key + ": must be a number");
    return v->get<double>();
}

std::int64_t integer(const json& j, const char* key, std::int64_t fallback,
                     const std::string& where) {
    const json* v = find(j, key);
    if (!v) return fallback;
    if (!v->is_number_integer()) bad(where + "." + key + ": must be an integer");
    return v->get<std::int64_t>();
}

std::uint64_t uinteger(const json& j, const char* key, std::uint64_t fallback,
                       const std::string& where) {
    const json* v = find(j, key);
    if (!v) return fallback;
    if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() &&
                                    v->get<std::int64_t>() < 0))
        bad(where + "." + key + ": must be a non-negative integer");
    return v->get<std::uint64_t>();
}

std::string str(const json& j, const char* key, const std::string& fallback,
                const std::string& where) {
    const json* v = find(j, key);
    if (!v) return fallback;
    if (!v->is_string()) bad(where + "." + key + ": must be a string");
    return v->get<std::string>();
}

bool boolean(const json& j, const char* key, bool fallback, const std::string& where) {
    const json* v = find(j, key);
    if (!v) return fallback;
    if (!v->is_boolean()) bad(where + "." + key + ": must be a boolean");
    return v->get<bool>();
}

AssetType asset_key(const std::string& text, const std::string& where) {
    try {
        return parse_asset_type(text);
    } catch (const ValidationError& e) {
        bad(where + ": " + e.what());
    }
}

void apply_engine(const json& j, EngineConfig& e, const std::string& where) {
    if (!j.is_object()) bad(where + ": must be an object");
    check_keys(j,
               {"alpha_direct", "alpha_confidence", "provider_offer_blend", "tf_decay",
                "tf_window_cap", "tf_window_count", "rt_learning_rate", "bootstrap_trust"},
               where);
    e.alpha_direct = num(j, "alpha_direct", e.alpha_direct, where);
    e.alpha_confidence = num(j, "alpha_confidence", e.alpha_confidence, where);
    e.provider_offer_blend = num(j, "provider_offer_blend", e.provider_offer_blend, where);
    e.tf_decay = num(j, "tf_decay", e.tf_decay, where);
    e.tf_window_cap = integer(j, "tf_window_cap", e.tf_window_cap, where);
    e.tf_window_count = integer(j, "tf_window_count", e.tf_window_count, where);
    e.rt_learning_rate = num(j, "rt_learning_rate", e.rt_learning_rate, where);
    e.bootstrap_trust = num(j, "bootstrap_trust", e.bootstrap_trust, where);
}

void apply_update_config(const json& j, UpdateConfig& u, const std::string& where) {
    if (!j.is_object()) bad(where + ": must be an object");
    check_keys(j, {"window_seconds", "notice_cap", "weird_cap", "weights",
                   "conn_success_states"},
               where);
    u.window_seconds = num(j, "window_seconds", u.window_seconds, where);
    u.notice_cap = num(j, "notice_cap", u.notice_cap, where);
    u.weird_cap = integer(j, "weird_cap", u.weird_cap, where);
    if (const json* w = find(j, "weights")) {
        if (!w->is_object()) bad(where + ".weights: must be an object");
        check_keys(*w, {"conn", "notice", "weird", "stat"}, where + ".weights");
        u.weights.conn = num(*w, "conn", u.weights.conn, where + ".weights");
        u.weights.notice = num(*w, "notice", u.weights.notice, where + ".weights");
        u.weights.weird = num(*w, "weird", u.weights.weird, where + ".weights");
        u.weights.stat = num(*w, "stat", u.weights.stat, where + ".weights");
    }
    if (const json* s = find(j, "conn_success_states")) {
        if (!s->is_array()) bad(where + ".conn_success_states: must be an array of strings");
        u.conn_success_states.clear();
        for (const json& v : *s) {
            if (!v.is_string()) bad(where + ".conn_success_states: must be an array of strings");
            u.conn_success_states.insert(v.get<std::string>());
        }
    }
}

void apply_priorities(const json& j, IntentPriorities& p, const std::string& where) {
    if (!j.is_object()) bad(where + ": must be an object");
    check_keys(j, {"weights", "reference_location", "performance_hint"}, where);
    if (const json* w = find(j, "weights")) {
        if (!w->is_object()) bad(where + ".weights: must be an object");
        p.weights.clear();
        for (auto it = w->begin(); it != w->end(); ++it) {
            if (!it->is_number()) bad(where + ".weights." + it.key() + ": must be a number");
            p.weights[it.key()] = it->get<double>();
        }
    }
    if (const json* r = find(j, "reference_location")) {
        if (r->is_null())
            p.reference_location.reset();
        else if (r->is_string())
            p.reference_location = r->get<std::string>();
        else
            bad(where + ".reference_location: must be a string");
    }
    if (const json* h = find(j, "performance_hint")) {
        if (!h->is_object()) bad(where + ".performance_hint: must be an object");
        p.performance_hint.clear();
        for (auto it = h->begin(); it != h->end(); ++it) {
            if (!it->is_number())
                bad(where + ".performance_hint." + it.key() + ": must be a number");
            p.performance_hint[it.key()] = it->get<double>();
        }
    }
}

void apply_scenario(const json& j, ScenarioConfig& s, const std::string& where) {
    if (!j.is_object()) bad(where + ": must be an object");
    check_keys(j,
               {"seed", "domains", "providers_per_domain", "offers_per_provider",
                "asset_mix", "honest_recommender_fraction", "bad_mouther_fraction",
                "bad_mouther_target", "windows", "history_rounds", "quality_min",
                "quality_max", "quality_overrides", "incident_schedule", "selected_offer",
                "parallel", "engine", "update", "priorities"},
               where);
    s.seed = uinteger(j, "seed", s.seed, where);
    s.domains = integer(j, "domains", s.domains, where);
    s.providers_per_domain = integer(j, "providers_per_domain", s.providers_per_domain, where);
    s.offers_per_provider = integer(j, "offers_per_provider", s.offers_per_provider, where);
    if (const json* m = find(j, "asset_mix")) {
        if (!m->is_object()) bad(where + ".asset_mix: must be an object");
        s.asset_mix.clear();
        for (auto it = m->begin(); it != m->end(); ++it) {
            if (!it->is_number()) bad(where + ".asset_mix." + it.key() + ": must be a number");
            s.asset_mix[asset_key(it.key(), where + ".asset_mix")] = it->get<double>();
        }
    }
    s.honest_recommender_fraction =
        num(j, "honest_recommender_fraction", s.honest_recommender_fraction, where);
    s.bad_mouther_fraction = num(j, "bad_mouther_fraction", s.bad_mouther_fraction, where);
    s.bad_mouther_target = str(j, "bad_mouther_target", s.bad_mouther_target, where);
    s.windows = integer(j, "windows", s.windows, where);
    s.history_rounds = integer(j, "history_rounds", s.history_rounds, where);
    s.quality_min = num(j, "quality_min", s.quality_min, where);
    s.quality_max = num(j, "quality_max", s.quality_max, where);
    if (const json* q = find(j, "quality_overrides")) {
        if (!q->is_object()) bad(where + ".quality_overrides: must be an object");
        s.quality_overrides.clear();
        for (auto it = q->begin(); it != q->end(); ++it) {
            if (!it->is_number())
                bad(where + ".quality_overrides." + it.key() + ": must be a number");
            s.quality_overrides[it.key()] = it->get<double>();
        }
    }
    if (const json* sched = find(j, "incident_schedule")) {
        if (!sched->is_array()) bad(where + ".incident_schedule: must be an array");
        s.incident_schedule.clear();
        for (const json& item : *sched) {
            if (!item.is_object()) bad(where + ".incident_schedule: entries must be objects");
            check_keys(item, {"window", "trustee_id", "severity"},
                       where + ".incident_schedule");
            IncidentSpec spec;
            spec.window_index = integer(item, "window", 0, where + ".incident_schedule");
            spec.trustee_id = str(item, "trustee_id", "", where + ".incident_schedule");
            spec.severity = str(item, "severity", "", where + ".incident_schedule");
            s.incident_schedule.push_back(std::move(spec));
        }
    }
    s.selected_offer = str(j, "selected_offer", s.selected_offer, where);
    s.parallel = boolean(j, "parallel", s.parallel, where);
    if (const json* e = find(j, "engine")) apply_engine(*e, s.engine, where + ".engine");
    if (const json* u = find(j, "update")) apply_update_config(*u, s.update, where + ".update");
    if (const json* p = find(j, "priorities"))
        apply_priorities(*p, s.priorities, where + ".priorities");
}

json engine_json(const EngineConfig& e) {
    return json{{"alpha_confidence", e.alpha_confidence},
                {"alpha_direct", e.alpha_direct},
                {"bootstrap_trust", e.bootstrap_trust},
                {"provider_offer_blend", e.provider_offer_blend},
                {"rt_learning_rate", e.rt_learning_rate},
                {"tf_decay", e.tf_decay},
                {"tf_window_cap", e.tf_window_cap},
                {"tf_window_count", e.tf_window_count}};
}

json update_json(const UpdateConfig& u) {
    json states = json::array();
    for (const std::string& s : u.conn_success_states) states.push_back(s);
    return json{{"conn_success_states", states},
                {"notice_cap", u.notice_cap},
                {"weights", json{{"conn", u.weights.conn},
                                 {"notice", u.weights.notice},
                                 {"stat", u.weights.stat},
                                 {"weird", u.weights.weird}}},
                {"weird_cap", u.weird_cap},
                {"window_seconds", u.window_seconds}};
}

json priorities_json(const IntentPriorities& p) {
    json j{{"weights", json(p.weights)}};
    if (p.reference_location) j["reference_location"] = *p.reference_location;
    if (!p.performance_hint.empty()) j["performance_hint"] = json(p.performance_hint);
    return j;
}

json scenario_json(const ScenarioConfig& s) {
    json mix = json::object();
    for (const auto& [type, weight] : s.asset_mix) mix[to_string(type)] = weight;
    json schedule = json::array();
    for (const IncidentSpec& spec : s.incident_schedule)
        schedule.push_back(json{{"severity", spec.severity},
                                {"trustee_id", spec.trustee_id},
                                {"window", spec.window_index}});
    return json{{"asset_mix", mix},
                {"bad_mouther_fraction", s.bad_mouther_fraction},
                {"bad_mouther_target", s.bad_mouther_target},
                {"domains", s.domains},
                {"engine", engine_json(s.engine)},
                {"history_rounds", s.history_rounds},
                {"honest_recommender_fraction", s.honest_recommender_fraction},
                {"incident_schedule", schedule},
                // `parallel` is an execution mode, not part of the scenario
                // identity: serial and parallel runs must fingerprint alike
                {"offers_per_provider", s.offers_per_provider},
                {"priorities", priorities_json(s.priorities)},
                {"providers_per_domain", s.providers_per_domain},
                {"quality_max", s.quality_max},
                {"quality_min", s.quality_min},
                {"quality_overrides", json(s.quality_overrides)},
                {"seed", s.seed},
                {"selected_offer", s.selected_offer},
                {"update", update_json(s.update)},
                {"windows", s.windows}};
}

}  // namespace

void EngineConfig::validate() const {
    check_unit(alpha_direct, "engine.alpha_direct");
    check_unit(alpha_confidence, "engine.alpha_confidence");
    check_unit(provider_offer_blend, "engine.provider_offer_blend");
    check_unit(bootstrap_trust, "engine.bootstrap_trust");
    if (!(tf_decay > 0.0 && tf_decay < 1.0)) bad("engine.tf_decay: must be within (0,1)");
    if (tf_window_cap < 1) bad("engine.tf_window_cap: must be >= 1");
    if (tf_window_count < 1) bad("engine.tf_window_count: must be >= 1");
    // 0 is allowed and freezes recommendation-trust updates
    check_unit(rt_learning_rate, "engine.rt_learning_rate");
}

void RpWeights::validate() const {
    check_unit(conn, "update.weights.conn");
    check_unit(notice, "update.weights.notice");
    check_unit(weird, "update.weights.weird");
    check_unit(stat, "update.weights.stat");
    if (std::fabs(conn + notice + weird + stat - 1.0) > 1e-9)
        bad("update.weights: must sum to 1");
}

void UpdateConfig::validate() const {
    if (!(window_seconds > 0.0)) bad("update.window_seconds: must be > 0");
    if (!(notice_cap > 0.0)) bad("update.notice_cap: must be > 0");
    if (weird_cap < 1) bad("update.weird_cap: must be >= 1");
    weights.validate();
    for (const std::string& s : conn_success_states)
        if (s.empty()) bad("update.conn_success_states: empty state code");
}

void IntentPriorities::validate() const {
    static const std::set<std::string> kCriteria = {"price", "proximity", "performance"};
    double total = 0.0;
    for (const auto& [criterion, weight] : weights) {
        if (!kCriteria.count(criterion))
            bad("discovery.weights: unknown criterion '" + criterion + "'");
        if (!(weight >= 0.0)) bad("discovery.weights." + criterion + ": must be >= 0");
        total += weight;
    }
    if (!(total > 0.0)) bad("discovery.weights: at least one weight must be > 0");
    for (const auto& [offer_id, value] : performance_hint)
        check_unit(value, "discovery.performance_hint." + offer_id);
}

void ScenarioConfig::validate() const {
    if (domains < 1) bad("scenario.domains: must be >= 1");
    if (providers_per_domain < 1) bad("scenario.providers_per_domain: must be >= 1");
    if (offers_per_provider < 1) bad("scenario.offers_per_provider: must be >= 1");
    if (windows < 1) bad("scenario.windows: must be >= 1");
    if (history_rounds < 1) bad("scenario.history_rounds: must be >= 1");
    check_unit(honest_recommender_fraction, "scenario.honest_recommender_fraction");
    check_unit(bad_mouther_fraction, "scenario.bad_mouther_fraction");
    if (honest_recommender_fraction + bad_mouther_fraction > 1.0 + 1e-9)
        bad("scenario: honest_recommender_fraction + bad_mouther_fraction must be <= 1");
    check_unit(quality_min, "scenario.quality_min");
    check_unit(quality_max, "scenario.quality_max");
    if (quality_min > quality_max) bad("scenario.quality_min: exceeds quality_max");
    for (const auto& [provider, quality] : quality_overrides)
        check_unit(quality, "scenario.quality_overrides." + provider);
    if (!asset_mix.empty()) {
        double total = 0.0;
        for (const auto& [type, weight] : asset_mix) {
            if (!(weight >= 0.0))
                bad("scenario.asset_mix." + to_string(type) + ": must be >= 0");
            total += weight;
        }
        if (!(total > 0.0)) bad("scenario.asset_mix: weights must not all be zero");
    }
    for (const IncidentSpec& spec : incident_schedule) {
        if (spec.window_index < 1 || spec.window_index > windows)
            bad("scenario.incident_schedule.window: must be within [1, windows]");
        if (spec.trustee_id.empty()) bad("scenario.incident_schedule.trustee_id: empty");
        if (spec.severity != "minor" && spec.severity != "major" && spec.severity != "severe")
            bad("scenario.incident_schedule.severity: must be minor, major, or severe");
    }
    engine.validate();
    update.validate();
    priorities.validate();
}

void GlobalConfig::validate() const {
    engine.validate();
    update.validate();
    discovery.validate();
    scenario.validate();
    for (const auto& [address, stakeholder] : address_map) {
        if (address.empty()) bad("address_map: empty address");
        if (stakeholder.empty()) bad("address_map." + address + ": empty stakeholder");
    }
    for (const auto& [note, weight] : notice_severities)
        check_unit(weight, "notice_severities." + note);
}

GlobalConfig parse_global_config(const std::string& json_text) {
    json root = parse_root(json_text);
    check_keys(root,
               {"engine", "update", "discovery", "address_map", "notice_severities",
                "scenario"},
               "config");
    GlobalConfig cfg;
    if (const json* e = find(root, "engine")) apply_engine(*e, cfg.engine, "engine");
    if (const json* u = find(root, "update")) apply_update_config(*u, cfg.update, "update");
    if (const json* d = find(root, "discovery"))
        apply_priorities(*d, cfg.discovery, "discovery");
    if (const json* a = find(root, "address_map")) {
        if (!a->is_object()) bad("address_map: must be an object");
        for (auto it = a->begin(); it != a->end(); ++it) {
            if (!it->is_string()) bad("address_map." + it.key() + ": must be a string");
            cfg.address_map[it.key()] = it->get<std::string>();
        }
    }
    if (const json* n = find(root, "notice_severities")) {
        if (!n->is_object()) bad("notice_severities: must be an object");
        for (auto it = n->begin(); it != n->end(); ++it) {
            if (!it->is_number()) bad("notice_severities." + it.key() + ": must be a number");
            cfg.notice_severities[it.key()] = it->get<double>();
        }
    }
    // the scenario inherits the global sections unless it overrides them
    cfg.scenario.engine = cfg.engine;
    cfg.scenario.update = cfg.update;
    cfg.scenario.priorities = cfg.discovery;
    if (const json* s = find(root, "scenario")) apply_scenario(*s, cfg.scenario, "scenario");
    cfg.validate();
    cfg.config_hash = fingerprint(render_global_config(cfg));
    return cfg;
}

GlobalConfig load_global_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) bad("config: cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_global_config(buffer.str());
}

GlobalConfig default_global_config() {
    GlobalConfig cfg;
    cfg.config_hash = fingerprint(render_global_config(cfg));
    return cfg;
}

std::string render_scenario_config(const ScenarioConfig& config) {
    return scenario_json(config).dump();
}

std::string render_global_config(const GlobalConfig& config) {
    json addresses = json::object();
    for (const auto& [address, stakeholder] : config.address_map)
        addresses[address] = stakeholder;
    json j{{"address_map", addresses},
           {"discovery", priorities_json(config.discovery)},
           {"engine", engine_json(config.engine)},
           {"notice_severities", json(config.notice_severities)},
           {"scenario", scenario_json(config.scenario)},
           {"update", update_json(config.update)}};
    return j.dump();
}

std::uint64_t fingerprint(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace trustmesh
