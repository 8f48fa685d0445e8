// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include "hybridex/cli.hpp"
#include "hybridex/corpus.hpp"
#include "hybridex/evaluation.hpp"
#include "hybridex/features.hpp"
#include "hybridex/io.hpp"
#include "hybridex/orchestrator.hpp"
#include "hybridex/reachability.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace fs = std::filesystem;
using namespace hybridex;

namespace {

// Pinned thresholds.
constexpr std::size_t kCorpusApps = 200;
constexpr std::uint64_t kCorpusSeed = 7;
constexpr std::uint64_t kTotalBudget = 4000;
constexpr double kRandomMargin = 1.10;
constexpr std::size_t kGuardRuns = 100;
constexpr std::size_t kGuardRunsOffNominalMin = 95;
constexpr std::size_t kNoRepeatPairs = 1000;
constexpr std::array<std::uint64_t, 5> kSeedSets{500, 501, 502, 503, 504};

struct Outcome {
    bool pass = false;
    std::string detail;
};

fs::path g_work;

int run_cli(std::vector<std::string> args, std::string* stdout_text = nullptr)
{
    args.insert(args.begin(), "hybridex");
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli_main(args, out, err);
    if (stdout_text != nullptr) {
        *stdout_text = out.str();
    }
    if (code != 0) {
        std::cerr << "cli failed (" << code << "): " << err.str();
    }
    return code;
}

std::map<std::string, std::string> tree_contents(const fs::path& root)
{
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) {
            files[fs::relative(e.path(), root).generic_string()] = read_text_file(e.path());
        }
    }
    return files;
}

std::string first_difference(const std::map<std::string, std::string>& a,
                             const std::map<std::string, std::string>& b)
{
    for (const auto& [name, content] : a) {
        auto it = b.find(name);
        if (it == b.end()) {
            return name + " missing in second tree";
        }
        if (it->second != content) {
            return name + " differs";
        }
    }
    for (const auto& [name, _] : b) {
        if (!a.contains(name)) {
            return name + " missing in first tree";
        }
    }
    return {};
}

// Shared state produced by the determinism run and reused by later checks.
struct PipelineOutput {
    std::vector<AppModel> corpus;
    std::vector<RunLog> logs;
    fs::path results;
    std::string report;
};

PipelineOutput g_pipeline;

Outcome check_determinism()
{
    const fs::path corpus_a = g_work / "c1" / "corpus_a";
    const fs::path corpus_b = g_work / "c1" / "corpus_b";
    const fs::path corpus = g_work / "c1" / "corpus";
    const std::string apps = std::to_string(kCorpusApps);
    const std::string seed = std::to_string(kCorpusSeed);
    for (const auto& dir : {corpus_a, corpus_b}) {
        if (run_cli({"gen-corpus", "--apps", apps, "--seed", seed, "--out", dir.string()}) != 0) {
            return {false, "gen-corpus failed"};
        }
    }
    if (auto d = first_difference(tree_contents(corpus_a), tree_contents(corpus_b)); !d.empty()) {
        return {false, "corpus not reproducible: " + d};
    }
    fs::copy(corpus_a, corpus, fs::copy_options::recursive);

    const fs::path config = g_work / "c1" / "experiment.json";
    write_text_file(config, R"({
  "budget_mode": "matched",
  "total_budget": 4000,
  "hybrid_random_share": 0.5,
  "surface": "default",
  "scenarios": [
    {"kind": "random_only", "random": {"seed": 500}},
    {"kind": "state_only", "state": {"seed": 500}},
    {"kind": "hybrid", "random": {"seed": 500}, "state": {"seed": 500}}
  ]
}
)");

    std::map<std::string, std::string> trees[2];
    std::string reports[2];
    const char* workers[2] = {"1", "8"};
    for (int i = 0; i < 2; ++i) {
        const fs::path results = g_work / "c1" / ("results_w" + std::string(workers[i]));
        const fs::path report_dir = g_work / "c1" / ("report_w" + std::string(workers[i]));
        if (run_cli({"run", "--corpus", corpus.string(), "--config", config.string(), "--out",
                     results.string(), "--workers", workers[i]})
            != 0) {
            return {false, "run failed"};
        }
        if (run_cli({"report", "--results", results.string(), "--top-k", "10", "--out", report_dir.string()},
                    &reports[i])
            != 0) {
            return {false, "report failed"};
        }
        trees[i] = tree_contents(results);
        for (auto& [name, content] : tree_contents(report_dir)) {
            trees[i]["report/" + name] = content;
        }
    }
    if (auto d = first_difference(trees[0], trees[1]); !d.empty()) {
        return {false, "workers 1 vs 8: " + d};
    }
    if (reports[0] != reports[1]) {
        return {false, "report stdout differs between worker counts"};
    }

    g_pipeline.corpus = load_corpus(corpus);
    g_pipeline.results = g_work / "c1" / "results_w1";
    g_pipeline.logs = read_runlogs(g_pipeline.results);
    g_pipeline.report = reports[0];

    std::size_t runlogs = 0;
    std::size_t csvs = 0;
    for (const auto& [name, _] : trees[0]) {
        runlogs += name.ends_with(".runlog.json") ? 1 : 0;
        csvs += (name.ends_with(".csv") && !name.starts_with("report/")) ? 1 : 0;
    }
    if (runlogs != kCorpusApps * 3 || csvs != 3) {
        return {false, "unexpected output shape: " + std::to_string(runlogs) + " runlogs, "
                           + std::to_string(csvs) + " CSVs"};
    }
    return {true, std::to_string(trees[0].size()) + " files (" + std::to_string(runlogs)
                      + " runlogs, 3 CSVs, report) byte-identical for workers 1 and 8"};
}

Outcome check_hybrid_union()
{
    // The hybrid CSV is built from whole-run signature sets, so it is an
    // independent record to hold the per-phase union against.
    const FeatureMatrix csv = read_csv(g_pipeline.results / "hybrid.csv");
    std::map<std::string, SignatureSet> csv_rows;
    for (std::size_t r = 0; r < csv.app_ids.size(); ++r) {
        for (std::size_t c = 0; c < csv.columns.size(); ++c) {
            if (csv.cells[r][c] == 1) {
                csv_rows[csv.app_ids[r]].insert(csv.columns[c]);
            }
        }
    }

    std::size_t hybrids = 0;
    std::size_t violations = 0;
    for (const auto& log : g_pipeline.logs) {
        if (log.scenario != ScenarioKind::hybrid) {
            continue;
        }
        ++hybrids;
        if (log.phases.size() != 2 || log.phases[0].label != PhaseLabel::random
            || log.phases[1].label != PhaseLabel::state) {
            ++violations;
            continue;
        }
        SignatureSet joined;
        std::uint64_t last_index = 0;
        bool ordered = true;
        for (const auto& p : log.phases) {
            for (const auto& e : p.emissions) {
                joined.insert(e.signature);
                ordered = ordered && e.event_index >= last_index;
                last_index = e.event_index;
            }
        }
        violations += (ordered && joined == csv_rows[log.app_id]) ? 0 : 1;
    }
    if (hybrids != kCorpusApps) {
        return {false, "expected " + std::to_string(kCorpusApps) + " hybrid runs, found " + std::to_string(hybrids)};
    }
    return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(hybrids)
                                 + " hybrid runs (phase union vs hybrid.csv row)"};
}

std::vector<Scenario> matched_scenarios(std::uint64_t seed, bool guard)
{
    auto scenarios = default_scenarios();
    for (auto& s : scenarios) {
        s.guard_enabled = guard;
        if (s.random_config) {
            s.random_config->seed = seed;
        }
        if (s.state_config) {
            s.state_config->seed = seed;
        }
    }
    return apply_budget_mode(scenarios, BudgetMode::matched, kTotalBudget, 0.5);
}

// Runs of the designed-corpus experiment, one batch per seed set.
std::map<std::uint64_t, std::vector<RunLog>> g_designed;
std::vector<AppModel> g_designed_corpus;

void run_designed_corpus()
{
    if (!g_designed.empty()) {
        return;
    }
    CorpusConfig cfg;
    cfg.app_count = kCorpusApps;
    cfg.seed = kCorpusSeed;
    cfg.guarded_fraction = 0.3;
    cfg.broadcast_fraction = 0.2;
    cfg.modal_fraction = 0.1;
    g_designed_corpus = generate_corpus(cfg);
    for (auto seed : kSeedSets) {
        g_designed[seed] = run_batch(g_designed_corpus, matched_scenarios(seed, true),
                                     SystemSurface::default_layout(), 4);
    }
}

Outcome check_hybrid_superiority()
{
    run_designed_corpus();
    std::map<ScenarioKind, double> total;
    for (const auto& [seed, logs] : g_designed) {
        for (const auto& log : logs) {
            total[log.scenario] += static_cast<double>(log.distinct_signatures().size());
        }
    }
    const double runs = static_cast<double>(kSeedSets.size() * g_designed_corpus.size());
    const double random = total[ScenarioKind::random_only] / runs;
    const double state = total[ScenarioKind::state_only] / runs;
    const double hybrid = total[ScenarioKind::hybrid] / runs;

    double oracle = 0;
    for (const auto& app : g_designed_corpus) {
        oracle += static_cast<double>(reachable_behaviors(app, kTotalBudget).size());
    }
    oracle /= static_cast<double>(g_designed_corpus.size());

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "mean signatures per app: hybrid %.3f, state_only %.3f, random_only %.3f "
                  "(hybrid/random %.3f, need >= %.2f; oracle %.3f)",
                  hybrid, state, random, random > 0 ? hybrid / random : 0.0, kRandomMargin, oracle);
    const bool pass = hybrid >= state && hybrid >= random && hybrid >= kRandomMargin * random;
    return {pass, buf};
}

Outcome check_complementarity()
{
    run_designed_corpus();
    std::map<ScenarioKind, std::vector<RunLog>> by_kind;
    for (const auto& log : g_designed.at(kSeedSets.front())) {
        by_kind[log.scenario].push_back(log);
    }
    const MonitoredCatalog catalog = default_catalog(g_designed_corpus);
    std::map<ScenarioKind, FeatureMatrix> matrices;
    for (auto& [kind, logs] : by_kind) {
        matrices.emplace(kind, build_matrix(logs, catalog));
    }
    const ScenarioComparison cmp = compare_scenarios(matrices);
    const auto random_wins = top_k_table(cmp, {ScenarioKind::random_only, ScenarioKind::state_only}, 10);
    const auto state_wins = top_k_table(cmp, {ScenarioKind::state_only, ScenarioKind::random_only}, 10);

    const bool report_has_both =
        g_pipeline.report.find("top 10: random_only > state_only\n  signature") != std::string::npos
        && g_pipeline.report.find("top 10: state_only > random_only\n  signature") != std::string::npos;
    const bool pass = !random_wins.rows.empty() && !state_wins.rows.empty() && report_has_both;
    return {pass, "random_only-over-state_only rows " + std::to_string(random_wins.rows.size())
                      + ", state_only-over-random_only rows " + std::to_string(state_wins.rows.size())
                      + (report_has_both ? "; both tables populated in the report" : "; report lacks a table")};
}

Outcome check_guard_efficacy()
{
    // Guards off: the device state left behind by each random run.
    std::size_t off_nominal = 0;
    for (std::size_t i = 0; i < kGuardRuns; ++i) {
        const AppModel& app = g_pipeline.corpus.at(i);
        RandomPolicyConfig cfg;
        cfg.seed = i + 1;
        cfg.event_budget = kTotalBudget;
        Session session =
            install_and_launch(app, DeviceConfig{}, EnvPolicy::none, true, SystemSurface::default_layout());
        run_random(session, cfg);
        off_nominal += session.config().nominal() ? 0 : 1;
    }

    // Guards on: every checkpoint in every run seen so far.
    std::size_t snapshots = 0;
    std::size_t violations = 0;
    std::size_t repaired = 0;
    auto scan = [&](const std::vector<RunLog>& logs) {
        for (const auto& log : logs) {
            for (const auto& s : log.config_snapshots) {
                ++snapshots;
                violations += s.after.nominal() ? 0 : 1;
                repaired += s.before.nominal() ? 0 : 1;
            }
        }
    };
    scan(g_pipeline.logs);
    run_designed_corpus();
    for (const auto& [seed, logs] : g_designed) {
        scan(logs);
    }
    const bool pass = off_nominal >= kGuardRunsOffNominalMin && violations == 0 && snapshots > 0;
    return {pass, "guards off: " + std::to_string(off_nominal) + "/" + std::to_string(kGuardRuns)
                      + " runs end off-nominal (need >= " + std::to_string(kGuardRunsOffNominalMin)
                      + "); guards on: " + std::to_string(violations) + " violations over "
                      + std::to_string(snapshots) + " snapshots (" + std::to_string(repaired)
                      + " restores performed)"};
}

Outcome check_no_repeat()
{
    std::size_t steps = 0;
    std::size_t violations = 0;
    for (std::size_t pair = 0; pair < kNoRepeatPairs; ++pair) {
        CorpusConfig cfg;
        cfg.app_count = 1;
        cfg.seed = 90'000 + pair;
        const AppModel app = generate_app(cfg, 0);
        Session session =
            install_and_launch(app, DeviceConfig{}, EnvPolicy::none, true, SystemSurface::default_layout());
        // A short random prefix so exploration starts from varied states.
        RandomPolicyConfig prefix;
        prefix.seed = pair;
        prefix.event_budget = pair % 50;
        run_random(session, prefix);
        guard_check(session, "prefix");

        const std::set<std::string> broadcasts = app.manifest.broadcast_actions;
        std::map<UiStateSignature, std::set<StateAction>> sent;
        StatePolicyConfig state;
        state.seed = pair;
        explore_state_based(session, state, [&](const StateStep& step) {
            ++steps;
            auto& done = sent[step.state_before];
            bool has_unexplored = false;
            for (const auto& w : step.ui_before.widgets) {
                for (auto g : w.accepted_gestures) {
                    has_unexplored = has_unexplored || !done.contains(trigger::Gesture{w.id, g});
                }
            }
            for (const auto& b : broadcasts) {
                has_unexplored = has_unexplored || !done.contains(trigger::Broadcast{b});
            }
            if (has_unexplored && done.contains(step.action)) {
                ++violations;
            }
            if (has_unexplored && std::holds_alternative<trigger::Key>(step.action)) {
                ++violations;
            }
            done.insert(step.action);
        });
    }
    return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(kNoRepeatPairs)
                                 + " (app, seed) pairs, " + std::to_string(steps) + " steps"};
}

Outcome check_oracle_dominance()
{
    std::map<std::string, const AppModel*> apps;
    for (const auto& app : g_pipeline.corpus) {
        apps[app.id()] = &app;
    }
    std::size_t violations = 0;
    for (const auto& log : g_pipeline.logs) {
        const SignatureSet reachable = reachable_behaviors(*apps.at(log.app_id), log.events_delivered());
        for (const auto& s : log.distinct_signatures()) {
            violations += reachable.contains(s) ? 0 : 1;
        }
    }
    return {violations == 0, std::to_string(violations) + " signatures outside the oracle over "
                                 + std::to_string(g_pipeline.logs.size()) + " runs"};
}

/// Signatures every emitting transition of which is broadcast-triggered.
SignatureSet broadcast_only_signatures(const AppModel& app)
{
    std::map<ApiSignature, bool> only_broadcast;
    for (const auto& t : app.transitions) {
        const bool is_broadcast = std::holds_alternative<trigger::Broadcast>(t.trigger);
        for (const auto& s : t.emits) {
            auto [it, inserted] = only_broadcast.emplace(s, is_broadcast);
            if (!inserted) {
                it->second = it->second && is_broadcast;
            }
        }
    }
    SignatureSet out;
    for (const auto& [s, only] : only_broadcast) {
        if (only) {
            out.insert(s);
        }
    }
    return out;
}

Outcome check_broadcast_exclusion()
{
    std::map<std::string, SignatureSet> gated;
    std::size_t gated_total = 0;
    for (const auto& app : g_pipeline.corpus) {
        gated[app.id()] = broadcast_only_signatures(app);
        gated_total += gated[app.id()].size();
    }
    std::size_t phases = 0;
    std::size_t violations = 0;
    for (const auto& log : g_pipeline.logs) {
        for (const auto& p : log.phases) {
            if (p.label != PhaseLabel::random) {
                continue;
            }
            ++phases;
            for (const auto& e : p.emissions) {
                violations += gated.at(log.app_id).contains(e.signature) ? 1 : 0;
            }
        }
    }
    return {violations == 0 && gated_total > 0,
            std::to_string(violations) + " broadcast-only emissions in " + std::to_string(phases)
                + " random phases (" + std::to_string(gated_total) + " broadcast-only behaviors in corpus)"};
}

Outcome check_csv_fidelity()
{
    const MonitoredCatalog catalog = load_catalog_file(g_pipeline.results / "catalog.txt");
    std::size_t matrices = 0;
    for (auto kind : kAllScenarios) {
        const fs::path path = g_pipeline.results / (std::string(to_string(kind)) + ".csv");
        const std::string text = read_text_file(path);
        const FeatureMatrix m = parse_csv(text);
        if (to_csv(m) != text) {
            return {false, path.filename().string() + ": write(parse(file)) differs from file"};
        }
        if (parse_csv(to_csv(m)) != m) {
            return {false, path.filename().string() + ": parse(write(m)) differs from m"};
        }
        if (m.columns != catalog.signatures) {
            return {false, path.filename().string() + ": header differs from catalog order"};
        }
        for (const auto& row : m.cells) {
            for (auto v : row) {
                if (v > 1) {
                    return {false, path.filename().string() + ": non-binary cell"};
                }
            }
        }
        ++matrices;
    }
    return {matrices == 3, std::to_string(matrices) + " matrices round-trip exactly; header = catalog order ("
                               + std::to_string(catalog.signatures.size()) + " columns)"};
}

Outcome check_paper_arithmetic()
{
    constexpr std::size_t kApps = 700;
    const ApiSignature exists("Ljava/io/File;->exists");
    auto matrix = [&](std::size_t ones) {
        FeatureMatrix m;
        m.columns = {exists};
        for (std::size_t i = 0; i < kApps; ++i) {
            char id[32];
            std::snprintf(id, sizeof id, "app%04zu", i);
            m.app_ids.emplace_back(id);
            m.cells.push_back({static_cast<std::uint8_t>(i < ones ? 1 : 0)});
        }
        return m;
    };
    const auto cmp = compare_scenarios({{ScenarioKind::random_only, matrix(477)},
                                        {ScenarioKind::state_only, matrix(477)},
                                        {ScenarioKind::hybrid, matrix(667)}});
    const auto& row = cmp.rows.at(0);
    const auto diff = row.difference(ScenarioKind::hybrid, ScenarioKind::random_only);
    const auto table = top_k_table(cmp, {ScenarioKind::hybrid, ScenarioKind::random_only}, 10);
    const bool pass = row.count(ScenarioKind::random_only) == 477 && row.count(ScenarioKind::hybrid) == 667
                      && diff == 190 && table.rows.size() == 1 && table.rows[0].difference == 190;
    return {pass, "counts 477 / 667, difference " + std::to_string(diff)};
}

}  // namespace

int main()
{
    g_work = fs::temp_directory_path() / ("hybridex_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(g_work);
    fs::create_directories(g_work);

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"determinism", check_determinism},
        {"hybrid-union exactness", check_hybrid_union},
        {"hybrid superiority", check_hybrid_superiority},
        {"complementarity", check_complementarity},
        {"guard efficacy", check_guard_efficacy},
        {"state-explorer no-repeat", check_no_repeat},
        {"oracle dominance", check_oracle_dominance},
        {"broadcast exclusion", check_broadcast_exclusion},
        {"csv fidelity", check_csv_fidelity},
        {"paper arithmetic", check_paper_arithmetic},
    };

    int failures = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s  %2d %-26s %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
        std::fflush(stdout);
    }
    fs::remove_all(g_work);
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
