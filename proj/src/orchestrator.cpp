#include "hybridex/orchestrator.hpp"

#include "hybridex/errors.hpp"
#include "hybridex/io.hpp"
#include "hybridex/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

namespace hybridex {

namespace {

bool abnormal(PhaseEnd end)
{
    return end == PhaseEnd::disconnected || end == PhaseEnd::crashed || end == PhaseEnd::safety_cap;
}

std::string termination_detail(const PhaseLog& phase)
{
    std::string detail(to_string(phase.label));
    detail += " phase ended by ";
    detail += to_string(phase.ended_by);
    detail += " after " + std::to_string(phase.events_delivered) + " events";
    return detail;
}

std::vector<PhaseLabel> phase_labels(ScenarioKind kind)
{
    switch (kind) {
    case ScenarioKind::random_only: return {PhaseLabel::random};
    case ScenarioKind::state_only: return {PhaseLabel::state};
    case ScenarioKind::hybrid: return {PhaseLabel::random, PhaseLabel::state};
    }
    return {};
}

RunSeeds seeds_of(const Scenario& scenario)
{
    RunSeeds seeds;
    if (scenario.kind != ScenarioKind::state_only && scenario.random_config) {
        seeds.random = scenario.random_config->seed;
    }
    if (scenario.kind != ScenarioKind::random_only && scenario.state_config) {
        seeds.state = scenario.state_config->seed;
    }
    return seeds;
}

/// Stand-in log for a run that threw; keeps the phase-shape invariant.
RunLog failed_run(const AppModel& app, const Scenario& scenario, const std::string& what)
{
    RunLog log;
    log.app_id = app.id();
    log.scenario = scenario.kind;
    log.seeds = seeds_of(scenario);
    log.rng_algorithm = std::string(Rng::kAlgorithm);
    for (auto label : phase_labels(scenario.kind)) {
        PhaseLog p;
        p.label = label;
        p.ended_by = PhaseEnd::crashed;
        log.phases.push_back(p);
    }
    log.early_termination =
        EarlyTermination{log.phases.front().label, PhaseEnd::crashed, "run failed: " + what};
    return log;
}

}  // namespace

void Scenario::validate() const
{
    const bool needs_random = kind != ScenarioKind::state_only;
    const bool needs_state = kind != ScenarioKind::random_only;
    if (needs_random && !random_config) {
        throw ValidationError(std::string(to_string(kind)) + " scenario needs a random config");
    }
    if (needs_state && !state_config) {
        throw ValidationError(std::string(to_string(kind)) + " scenario needs a state config");
    }
    if (random_config) {
        random_config->validate();
    }
    if (state_config) {
        state_config->validate();
    }
}

std::vector<Scenario> default_scenarios()
{
    return {
        {ScenarioKind::random_only, RandomPolicyConfig{}, std::nullopt, true},
        {ScenarioKind::state_only, std::nullopt, StatePolicyConfig{}, true},
        {ScenarioKind::hybrid, RandomPolicyConfig{}, StatePolicyConfig{}, true},
    };
}

ConfigSnapshot guard_check(Session& session, std::string_view checkpoint)
{
    ConfigSnapshot snap;
    snap.checkpoint = std::string(checkpoint);
    snap.before = query_config(session);
    DeviceConfig current = snap.before;
    if (!current.adb_on) {
        current = apply_restore_sequence(session, RestoreTarget::adb_on);
    }
    if (current.airplane_on) {
        current = apply_restore_sequence(session, RestoreTarget::airplane_off);
    }
    if (!current.wifi_on) {
        current = apply_restore_sequence(session, RestoreTarget::wifi_on);
    }
    snap.after = query_config(session);
    return snap;
}

RunLog run_scenario(const AppModel& app, const Scenario& scenario, const SystemSurface& surface)
{
    scenario.validate();
    RunLog log;
    log.app_id = app.id();
    log.scenario = scenario.kind;
    log.seeds = seeds_of(scenario);
    log.rng_algorithm = std::string(Rng::kAlgorithm);

    const bool ignore_crashes = scenario.random_config ? scenario.random_config->ignore_crashes : true;
    Session session = install_and_launch(app, DeviceConfig{}, EnvPolicy::none, ignore_crashes, surface);

    auto guard = [&](std::string_view checkpoint) {
        if (scenario.guard_enabled) {
            log.config_snapshots.push_back(guard_check(session, checkpoint));
        }
    };
    auto finish_phase = [&](PhaseLog phase) {
        if (!log.early_termination && abnormal(phase.ended_by)) {
            log.early_termination = EarlyTermination{phase.label, phase.ended_by, termination_detail(phase)};
        }
        log.phases.push_back(std::move(phase));
    };

    switch (scenario.kind) {
    case ScenarioKind::random_only:
        guard("before_random");
        finish_phase(run_random(session, *scenario.random_config));
        break;
    case ScenarioKind::state_only:
        guard("before_state");
        finish_phase(run_state_based(session, *scenario.state_config));
        break;
    case ScenarioKind::hybrid:
        guard("before_random");
        finish_phase(run_random(session, *scenario.random_config));
        guard("between_phases");
        finish_phase(run_state_based(session, *scenario.state_config));
        guard("after_state");
        break;
    }
    return log;
}

std::vector<RunLog> run_batch(const std::vector<AppModel>& corpus,
                              const std::vector<Scenario>& scenarios,
                              const SystemSurface& surface, std::size_t worker_count)
{
    if (worker_count < 1) {
        throw ValidationError("worker_count must be at least 1");
    }
    for (const auto& s : scenarios) {
        s.validate();
    }
    surface.validate();

    std::vector<std::size_t> app_order(corpus.size());
    std::iota(app_order.begin(), app_order.end(), 0);
    std::stable_sort(app_order.begin(), app_order.end(),
                     [&](std::size_t a, std::size_t b) { return corpus[a].id() < corpus[b].id(); });
    std::vector<std::size_t> scenario_order(scenarios.size());
    std::iota(scenario_order.begin(), scenario_order.end(), 0);
    std::stable_sort(scenario_order.begin(), scenario_order.end(), [&](std::size_t a, std::size_t b) {
        return scenarios[a].kind < scenarios[b].kind;
    });

    std::vector<std::pair<std::size_t, std::size_t>> tasks;
    tasks.reserve(app_order.size() * scenario_order.size());
    for (auto a : app_order) {
        for (auto s : scenario_order) {
            tasks.emplace_back(a, s);
        }
    }

    std::vector<RunLog> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const AppModel& app = corpus[tasks[i].first];
            const Scenario& scenario = scenarios[tasks[i].second];
            try {
                results[i] = run_scenario(app, scenario, surface);
            } catch (const std::exception& e) {
                results[i] = failed_run(app, scenario, e.what());
            }
        }
    };

    const std::size_t threads = std::min(worker_count, std::max<std::size_t>(tasks.size(), 1));
    if (threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(work);
        }
    }
    return results;
}

std::string_view to_string(BudgetMode mode)
{
    return mode == BudgetMode::matched ? "matched" : "standalone";
}

BudgetMode budget_mode_from_string(std::string_view text)
{
    if (text == "matched") {
        return BudgetMode::matched;
    }
    if (text == "standalone") {
        return BudgetMode::standalone;
    }
    throw ValidationError("unknown budget mode '" + std::string(text) + "'");
}

std::vector<Scenario> apply_budget_mode(std::vector<Scenario> scenarios, BudgetMode mode,
                                        std::uint64_t total, double random_share)
{
    if (mode == BudgetMode::standalone) {
        return scenarios;
    }
    if (!(random_share >= 0.0 && random_share <= 1.0)) {
        throw ValidationError("hybrid_random_share must lie in [0, 1]");
    }
    const auto random_part = static_cast<std::uint64_t>(std::llround(static_cast<double>(total) * random_share));
    for (auto& s : scenarios) {
        switch (s.kind) {
        case ScenarioKind::random_only:
            if (s.random_config) {
                s.random_config->event_budget = total;
            }
            break;
        case ScenarioKind::state_only:
            if (s.state_config) {
                s.state_config->event_budget = total;
            }
            break;
        case ScenarioKind::hybrid:
            if (s.random_config) {
                s.random_config->event_budget = random_part;
            }
            if (s.state_config) {
                s.state_config->event_budget = total - random_part;
            }
            break;
        }
    }
    return scenarios;
}

void write_runlogs(const std::filesystem::path& dir, const std::vector<RunLog>& logs)
{
    std::set<std::pair<std::string, ScenarioKind>> seen;
    for (const auto& log : logs) {
        if (!seen.emplace(log.app_id, log.scenario).second) {
            throw ValidationError("two run logs for " + log.app_id + "/"
                                  + std::string(to_string(log.scenario)));
        }
        write_text_file(dir / "runs" / log.app_id / (std::string(to_string(log.scenario)) + ".runlog.json"),
                        serialize_runlog(log));
    }
}

std::vector<RunLog> read_runlogs(const std::filesystem::path& dir)
{
    const auto runs = dir / "runs";
    std::error_code ec;
    if (!std::filesystem::is_directory(runs, ec)) {
        throw IoError("'" + dir.string() + "' has no runs/ directory");
    }
    std::vector<RunLog> logs;
    for (const auto& app_dir : std::filesystem::directory_iterator(runs)) {
        if (!app_dir.is_directory()) {
            continue;
        }
        for (const auto& f : std::filesystem::directory_iterator(app_dir.path())) {
            const std::string name = f.path().filename().string();
            if (!f.is_regular_file() || !name.ends_with(".runlog.json")) {
                continue;
            }
            try {
                logs.push_back(runlog_from_json(nlohmann::json::parse(read_text_file(f.path()))));
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(f.path().string() + ": " + e.what());
            } catch (const ParseError& e) {
                throw ParseError(f.path().string() + ": " + e.what());
            }
        }
    }
    std::sort(logs.begin(), logs.end(), [](const RunLog& a, const RunLog& b) {
        return std::tie(a.app_id, a.scenario) < std::tie(b.app_id, b.scenario);
    });
    return logs;
}

}  // namespace hybridex
