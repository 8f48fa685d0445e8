#include "hybridex/experiment.hpp"

#include "hybridex/errors.hpp"
#include "hybridex/io.hpp"

#include <algorithm>
#include <set>

namespace hybridex {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, std::string_view where)
{
    if (!obj.is_object()) {
        throw ParseError(std::string(where) + ": expected an object");
    }
    for (const auto& [key, _] : obj.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ValidationError(std::string(where) + ": unknown field '" + key + "'");
        }
    }
}

Rect rect_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 4) {
        throw ParseError("hazard rect must be [left, top, right, bottom]");
    }
    return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

SystemSurface surface_from_json(const json& j)
{
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "default") {
            return SystemSurface::default_layout();
        }
        if (name == "none") {
            return SystemSurface::none();
        }
        throw ValidationError("surface: unknown preset '" + name + "'");
    }
    reject_unknown(j, {"hazard_regions"}, "surface");
    SystemSurface surface;
    for (const auto& h : j.at("hazard_regions")) {
        reject_unknown(h, {"rect", "mutation"}, "hazard region");
        surface.hazard_regions.push_back(
            {rect_from_json(h.at("rect")), config_mutation_from_string(h.at("mutation").get<std::string>())});
    }
    return surface;
}

RandomPolicyConfig random_from_json(const json& j)
{
    reject_unknown(j, {"seed", "event_budget", "gesture_mix", "ignore_crashes"}, "random");
    RandomPolicyConfig c;
    c.seed = j.value("seed", c.seed);
    c.event_budget = j.value("event_budget", c.event_budget);
    c.ignore_crashes = j.value("ignore_crashes", c.ignore_crashes);
    if (j.contains("gesture_mix")) {
        const json& m = j.at("gesture_mix");
        reject_unknown(m, {"touch", "swipe", "key"}, "gesture_mix");
        c.gesture_mix = {m.at("touch").get<double>(), m.at("swipe").get<double>(), m.at("key").get<double>()};
    }
    return c;
}

StatePolicyConfig state_from_json(const json& j)
{
    reject_unknown(j, {"seed", "event_budget", "policy", "env_policy", "stuck_threshold", "cost_per_event"},
                   "state");
    StatePolicyConfig c;
    c.seed = j.value("seed", c.seed);
    c.event_budget = j.value("event_budget", c.event_budget);
    c.stuck_threshold = j.value("stuck_threshold", c.stuck_threshold);
    c.cost_per_event = j.value("cost_per_event", c.cost_per_event);
    if (j.contains("policy")) {
        c.policy = state_policy_from_string(j.at("policy").get<std::string>());
    }
    if (j.contains("env_policy")) {
        c.env_policy = env_policy_from_string(j.at("env_policy").get<std::string>());
    }
    return c;
}

Scenario scenario_from_json(const json& j)
{
    reject_unknown(j, {"kind", "guard_enabled", "random", "state"}, "scenario");
    Scenario s;
    s.kind = scenario_kind_from_string(j.at("kind").get<std::string>());
    s.guard_enabled = j.value("guard_enabled", true);
    if (j.contains("random")) {
        s.random_config = random_from_json(j.at("random"));
    } else if (s.kind != ScenarioKind::state_only) {
        s.random_config = RandomPolicyConfig{};
    }
    if (j.contains("state")) {
        s.state_config = state_from_json(j.at("state"));
    } else if (s.kind != ScenarioKind::random_only) {
        s.state_config = StatePolicyConfig{};
    }
    return s;
}

std::optional<std::string> optional_path(const json& doc, const char* key)
{
    if (!doc.contains(key) || doc.at(key).is_null()) {
        return std::nullopt;
    }
    return doc.at(key).get<std::string>();
}

}  // namespace

std::vector<Scenario> ExperimentConfig::resolved_scenarios() const
{
    return apply_budget_mode(scenarios, budget_mode, total_budget, hybrid_random_share);
}

void ExperimentConfig::validate() const
{
    if (workers < 1) {
        throw ValidationError("workers must be at least 1");
    }
    if (!(hybrid_random_share >= 0.0 && hybrid_random_share <= 1.0)) {
        throw ValidationError("hybrid_random_share must lie in [0, 1]");
    }
    surface.validate();
    std::set<ScenarioKind> kinds;
    for (const auto& s : scenarios) {
        if (!kinds.insert(s.kind).second) {
            throw ValidationError("scenario kind '" + std::string(to_string(s.kind)) + "' listed twice");
        }
        s.validate();
    }
}

ExperimentConfig parse_experiment(std::string_view text)
{
    ExperimentConfig config;
    try {
        const json doc = json::parse(text);
        reject_unknown(doc,
                       {"corpus", "catalog", "workers", "budget_mode", "total_budget",
                        "hybrid_random_share", "surface", "scenarios"},
                       "experiment");
        config.corpus = optional_path(doc, "corpus");
        config.catalog = optional_path(doc, "catalog");
        config.workers = doc.value("workers", config.workers);
        if (doc.contains("budget_mode")) {
            config.budget_mode = budget_mode_from_string(doc.at("budget_mode").get<std::string>());
        }
        config.total_budget = doc.value("total_budget", config.total_budget);
        config.hybrid_random_share = doc.value("hybrid_random_share", config.hybrid_random_share);
        if (doc.contains("surface")) {
            config.surface = surface_from_json(doc.at("surface"));
        }
        if (doc.contains("scenarios")) {
            config.scenarios.clear();
            for (const auto& s : doc.at("scenarios")) {
                config.scenarios.push_back(scenario_from_json(s));
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("experiment config: ") + e.what());
    }
    config.validate();
    return config;
}

ExperimentConfig load_experiment_file(const std::filesystem::path& path)
{
    try {
        return parse_experiment(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

json to_json(const ExperimentConfig& config)
{
    json hazards = json::array();
    for (const auto& h : config.surface.hazard_regions) {
        hazards.push_back({{"rect", {h.area.left, h.area.top, h.area.right, h.area.bottom}},
                           {"mutation", to_string(h.mutation)}});
    }
    json scenarios = json::array();
    for (const auto& s : config.scenarios) {
        json js = {{"kind", to_string(s.kind)}, {"guard_enabled", s.guard_enabled}};
        if (s.random_config) {
            const auto& r = *s.random_config;
            js["random"] = {{"seed", r.seed},
                            {"event_budget", r.event_budget},
                            {"ignore_crashes", r.ignore_crashes},
                            {"gesture_mix",
                             {{"touch", r.gesture_mix.touch}, {"swipe", r.gesture_mix.swipe}, {"key", r.gesture_mix.key}}}};
        }
        if (s.state_config) {
            const auto& st = *s.state_config;
            js["state"] = {{"seed", st.seed},
                           {"event_budget", st.event_budget},
                           {"policy", "dynamic"},
                           {"env_policy", to_string(st.env_policy)},
                           {"stuck_threshold", st.stuck_threshold},
                           {"cost_per_event", st.cost_per_event}};
        }
        scenarios.push_back(std::move(js));
    }
    return {{"corpus", config.corpus ? json(*config.corpus) : json(nullptr)},
            {"catalog", config.catalog ? json(*config.catalog) : json(nullptr)},
            {"workers", config.workers},
            {"budget_mode", to_string(config.budget_mode)},
            {"total_budget", config.total_budget},
            {"hybrid_random_share", config.hybrid_random_share},
            {"surface", {{"hazard_regions", hazards}}},
            {"scenarios", scenarios}};
}

}  // namespace hybridex
