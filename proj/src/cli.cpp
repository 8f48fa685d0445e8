#include "hybridex/cli.hpp"

#include "hybridex/corpus.hpp"
#include "hybridex/errors.hpp"
#include "hybridex/evaluation.hpp"
#include "hybridex/experiment.hpp"
#include "hybridex/features.hpp"
#include "hybridex/io.hpp"
#include "hybridex/orchestrator.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace hybridex {

namespace {

namespace fs = std::filesystem;

struct GenCorpusArgs {
    CorpusConfig config;
    std::string out;
};

struct RunArgs {
    std::string corpus;
    std::string config;
    std::string out;
    std::size_t workers = 0;
};

struct ReportArgs {
    std::string results;
    std::size_t top_k = 10;
    std::string out;
    std::string corpus;
};

int gen_corpus(const GenCorpusArgs& args, std::ostream& out)
{
    const auto apps = generate_corpus(args.config);
    save_corpus(args.out, args.config, apps);
    out << "wrote " << apps.size() << " apps to " << args.out << "\n";
    return 0;
}

int run(const RunArgs& args, std::ostream& out)
{
    ExperimentConfig config = args.config.empty() ? ExperimentConfig{} : load_experiment_file(args.config);
    if (!args.corpus.empty()) {
        config.corpus = args.corpus;
    }
    if (args.workers > 0) {
        config.workers = args.workers;
    }
    config.validate();
    if (!config.corpus) {
        throw ValidationError("no corpus: pass --corpus or set \"corpus\" in the experiment config");
    }
    const auto corpus = load_corpus(*config.corpus);
    const MonitoredCatalog catalog = config.catalog ? load_catalog_file(*config.catalog) : default_catalog(corpus);
    const auto scenarios = config.resolved_scenarios();

    const auto logs = run_batch(corpus, scenarios, config.surface, config.workers);
    const fs::path dir(args.out);
    write_runlogs(dir, logs);
    write_text_file(dir / "catalog.txt", serialize_catalog(catalog));

    MatrixDiagnostics diagnostics;
    for (const auto& s : scenarios) {
        std::vector<RunLog> subset;
        for (const auto& log : logs) {
            if (log.scenario == s.kind) {
                subset.push_back(log);
            }
        }
        write_csv(build_matrix(subset, catalog, &diagnostics),
                  dir / (std::string(to_string(s.kind)) + ".csv"));
    }

    // Worker count is left out: it must not influence any output byte.
    ExperimentConfig recorded = config;
    recorded.scenarios = scenarios;
    nlohmann::json info = to_json(recorded);
    info.erase("workers");
    nlohmann::json dropped = nlohmann::json::object();
    for (const auto& [sig, apps] : diagnostics.dropped) {
        dropped[sig.text()] = apps;
    }
    info["dropped_signatures"] = dropped;
    write_text_file(dir / "run_info.json", info.dump(2) + "\n");

    std::size_t early = 0;
    for (const auto& log : logs) {
        early += log.early_termination ? 1 : 0;
    }
    out << "ran " << logs.size() << " runs (" << corpus.size() << " apps x " << scenarios.size()
        << " scenarios), " << early << " ended early; results in " << args.out << "\n";
    return 0;
}

int report(const ReportArgs& args, std::ostream& out)
{
    if (args.top_k < 1) {
        throw ValidationError("--top-k must be at least 1");
    }
    const fs::path dir(args.results);
    std::map<ScenarioKind, FeatureMatrix> matrices;
    for (auto kind : kAllScenarios) {
        const fs::path csv = dir / (std::string(to_string(kind)) + ".csv");
        if (fs::exists(csv)) {
            matrices.emplace(kind, read_csv(csv));
        }
    }
    if (matrices.empty()) {
        throw IoError("no scenario CSVs in '" + args.results + "'");
    }
    const ScenarioComparison cmp = compare_scenarios(matrices);

    std::string text = "apps: " + std::to_string(cmp.app_count) + ", monitored signatures: "
                       + std::to_string(cmp.rows.size()) + "\n";
    const fs::path info_path = dir / "run_info.json";
    nlohmann::json info;
    if (fs::exists(info_path)) {
        info = nlohmann::json::parse(read_text_file(info_path));
        text += "budget mode: " + info.value("budget_mode", std::string("?")) + ", total budget "
                + std::to_string(info.value("total_budget", 0)) + "\n";
    }
    text += "\n";

    std::map<std::string, std::string> table_csvs;
    for (const auto& pair : report_pairs()) {
        if (!cmp.has(pair.first) || !cmp.has(pair.second)) {
            continue;
        }
        const TopKTable table = top_k_table(cmp, pair, args.top_k);
        text += render_text(table) + "\n";
        table_csvs["top_" + std::string(to_string(pair.first)) + "_over_"
                   + std::string(to_string(pair.second)) + ".csv"] = render_csv(table);
    }
    text += render_summary(summary_statistics(cmp)) + "\n";

    std::string corpus_dir = args.corpus;
    if (corpus_dir.empty() && info.contains("corpus") && info.at("corpus").is_string()) {
        corpus_dir = info.at("corpus").get<std::string>();
    }
    if (!corpus_dir.empty()) {
        const auto corpus = load_corpus(corpus_dir);
        text += render_coverage(coverage_vs_oracle(read_runlogs(dir), corpus));
    } else {
        text += "oracle coverage: skipped (corpus location unknown)\n";
    }

    out << text;
    if (!args.out.empty()) {
        const fs::path odir(args.out);
        write_text_file(odir / "report.txt", text);
        for (const auto& [name, csv] : table_csvs) {
            write_text_file(odir / name, csv);
        }
    }
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Hybrid exploration simulator: corpus generation, scenario runs, reports"};
    app.require_subcommand(1);

    GenCorpusArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-corpus", "Generate a synthetic app corpus");
    gen_cmd->add_option("--apps", gen.config.app_count, "Number of apps")->required();
    gen_cmd->add_option("--seed", gen.config.seed, "Generator seed")->required();
    gen_cmd->add_option("--out", gen.out, "Output directory")->required();
    gen_cmd->add_option("--screens-min", gen.config.screens_per_app.min);
    gen_cmd->add_option("--screens-max", gen.config.screens_per_app.max);
    gen_cmd->add_option("--behaviors-min", gen.config.behaviors_per_app.min);
    gen_cmd->add_option("--behaviors-max", gen.config.behaviors_per_app.max);
    gen_cmd->add_option("--guarded-fraction", gen.config.guarded_fraction);
    gen_cmd->add_option("--modal-fraction", gen.config.modal_fraction);
    gen_cmd->add_option("--broadcast-fraction", gen.config.broadcast_fraction);
    gen_cmd->add_option("--tag", gen.config.tag, "Package id prefix");

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Run every scenario over a corpus");
    run_cmd->add_option("--corpus", run_args.corpus, "Corpus directory (overrides the config)");
    run_cmd->add_option("--config", run_args.config, "Experiment config JSON");
    run_cmd->add_option("--out", run_args.out, "Results directory")->required();
    run_cmd->add_option("--workers", run_args.workers, "Worker threads (overrides the config)");

    ReportArgs rep;
    auto* rep_cmd = app.add_subcommand("report", "Tables, summary and oracle coverage");
    rep_cmd->add_option("--results", rep.results, "Results directory of a run")->required();
    rep_cmd->add_option("--top-k", rep.top_k, "Rows per table");
    rep_cmd->add_option("--out", rep.out, "Also write report.txt and table CSVs here");
    rep_cmd->add_option("--corpus", rep.corpus, "Corpus directory (default: from run_info.json)");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen_cmd) {
            return gen_corpus(gen, out);
        }
        if (*run_cmd) {
            return run(run_args, out);
        }
        return report(rep, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
    }
    return 1;
}

int cli_main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return cli_main(args, std::cout, std::cerr);
}

}  // namespace hybridex
