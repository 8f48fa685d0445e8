#include "hybridex/evaluation.hpp"

#include "hybridex/errors.hpp"
#include "hybridex/reachability.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace hybridex {

namespace {

std::size_t index_of(ScenarioKind kind) { return static_cast<std::size_t>(kind); }

std::string pad_right(std::string_view s, std::size_t width)
{
    std::string out(s);
    out.resize(std::max(width, s.size()), ' ');
    return out;
}

std::string pad_left(std::string_view s, std::size_t width)
{
    return std::string(width > s.size() ? width - s.size() : 0, ' ') + std::string(s);
}

std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",;\"\r\n") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

std::string format_ratio(double r)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", r);
    return buf;
}

}  // namespace

bool ScenarioComparison::has(ScenarioKind kind) const
{
    return std::find(scenarios.begin(), scenarios.end(), kind) != scenarios.end();
}

std::size_t ScenarioComparison::total(ScenarioKind kind) const
{
    std::size_t sum = 0;
    for (const auto& r : rows) {
        sum += r.count(kind);
    }
    return sum;
}

ScenarioComparison compare_scenarios(const std::map<ScenarioKind, FeatureMatrix>& matrices)
{
    ScenarioComparison cmp;
    if (matrices.empty()) {
        return cmp;
    }
    const FeatureMatrix& ref = matrices.begin()->second;
    for (const auto& [kind, m] : matrices) {
        m.validate();
        if (m.columns != ref.columns) {
            throw ValidationError("mismatched-catalog: " + std::string(to_string(kind))
                                  + " matrix has different columns");
        }
        if (m.app_ids != ref.app_ids) {
            throw ValidationError("mismatched-apps: " + std::string(to_string(kind))
                                  + " matrix has a different app set");
        }
        cmp.scenarios.push_back(kind);
    }
    cmp.app_count = ref.app_ids.size();
    cmp.rows.resize(ref.columns.size());
    for (std::size_t c = 0; c < ref.columns.size(); ++c) {
        cmp.rows[c].signature = ref.columns[c];
    }
    for (const auto& [kind, m] : matrices) {
        for (const auto& row : m.cells) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                cmp.rows[c].apps[index_of(kind)] += row[c];
            }
        }
    }
    return cmp;
}

std::string pair_label(ScenarioPair pair)
{
    return std::string(to_string(pair.first)) + " vs " + std::string(to_string(pair.second));
}

TopKTable top_k_table(const ScenarioComparison& comparison, ScenarioPair pair, std::size_t k)
{
    if (k < 1) {
        throw ValidationError("top-k: k must be at least 1");
    }
    TopKTable table{pair, k, {}};
    for (const auto& r : comparison.rows) {
        const std::int64_t d = r.difference(pair.first, pair.second);
        if (d > 0) {
            table.rows.push_back({r.signature, r.count(pair.first), r.count(pair.second), d});
        }
    }
    std::stable_sort(table.rows.begin(), table.rows.end(), [](const TopKRow& a, const TopKRow& b) {
        if (a.difference != b.difference) {
            return a.difference > b.difference;
        }
        return a.signature < b.signature;
    });
    if (table.rows.size() > k) {
        table.rows.resize(k);
    }
    return table;
}

std::string render_text(const TopKTable& table)
{
    const std::string first(to_string(table.pair.first));
    const std::string second(to_string(table.pair.second));
    std::string out = "top " + std::to_string(table.k) + ": " + first + " > " + second + "\n";
    if (table.rows.empty()) {
        return out + "  (no signatures)\n";
    }
    std::size_t sig_w = std::string_view("signature").size();
    for (const auto& r : table.rows) {
        sig_w = std::max(sig_w, r.signature.text().size());
    }
    const std::size_t first_w = std::max<std::size_t>(first.size(), 5);
    const std::size_t second_w = std::max<std::size_t>(second.size(), 5);
    const std::size_t diff_w = std::string_view("difference").size();
    out += "  " + pad_right("signature", sig_w) + "  " + pad_left(first, first_w) + "  "
           + pad_left(second, second_w) + "  " + pad_left("difference", diff_w) + "\n";
    for (const auto& r : table.rows) {
        out += "  " + pad_right(r.signature.text(), sig_w) + "  "
               + pad_left(std::to_string(r.count_first), first_w) + "  "
               + pad_left(std::to_string(r.count_second), second_w) + "  "
               + pad_left(std::to_string(r.difference), diff_w) + "\n";
    }
    return out;
}

std::string render_csv(const TopKTable& table)
{
    std::string out = "signature," + std::string(to_string(table.pair.first)) + ","
                      + std::string(to_string(table.pair.second)) + ",difference\n";
    for (const auto& r : table.rows) {
        out += csv_field(r.signature.text()) + "," + std::to_string(r.count_first) + ","
               + std::to_string(r.count_second) + "," + std::to_string(r.difference) + "\n";
    }
    return out;
}

std::vector<ScenarioPair> report_pairs()
{
    return {{ScenarioKind::hybrid, ScenarioKind::random_only},
            {ScenarioKind::hybrid, ScenarioKind::state_only},
            {ScenarioKind::state_only, ScenarioKind::random_only},
            {ScenarioKind::random_only, ScenarioKind::state_only}};
}

SummaryStatistics summary_statistics(const ScenarioComparison& comparison)
{
    SummaryStatistics summary;
    for (const auto& r : comparison.rows) {
        std::set<std::size_t> values;
        for (auto kind : comparison.scenarios) {
            values.insert(r.count(kind));
        }
        if (values.size() > 1) {
            ++summary.signatures_with_difference;
        }
    }
    const std::vector<ScenarioPair> ordered{
        {ScenarioKind::hybrid, ScenarioKind::random_only},
        {ScenarioKind::random_only, ScenarioKind::hybrid},
        {ScenarioKind::hybrid, ScenarioKind::state_only},
        {ScenarioKind::state_only, ScenarioKind::hybrid},
        {ScenarioKind::state_only, ScenarioKind::random_only},
        {ScenarioKind::random_only, ScenarioKind::state_only},
    };
    for (const auto& pair : ordered) {
        if (!comparison.has(pair.first) || !comparison.has(pair.second)) {
            continue;
        }
        PairCount pc{pair, 0};
        for (const auto& r : comparison.rows) {
            if (r.count(pair.first) > r.count(pair.second)) {
                ++pc.signatures;
            }
        }
        summary.strictly_greater.push_back(pc);
    }
    return summary;
}

std::string render_summary(const SummaryStatistics& summary)
{
    const std::string n = std::to_string(summary.signatures_with_difference);
    std::string out = "signatures with any difference: " + n + "\n";
    for (const auto& pc : summary.strictly_greater) {
        out += "  " + std::string(to_string(pc.pair.first)) + " > " + std::string(to_string(pc.pair.second))
               + ": " + std::to_string(pc.signatures) + " of " + n + "\n";
    }
    return out;
}

CoverageReport coverage_vs_oracle(const std::vector<RunLog>& logs, const std::vector<AppModel>& corpus,
                                  std::optional<std::uint64_t> budget)
{
    std::map<std::string, const AppModel*> by_id;
    for (const auto& app : corpus) {
        by_id.emplace(app.id(), &app);
    }
    // A search that reached its fixpoint answers every larger budget.
    std::map<std::string, ReachabilityResult> saturated;
    auto oracle = [&](const AppModel& app, std::uint64_t b) {
        if (auto it = saturated.find(app.id()); it != saturated.end() && it->second.depth <= b) {
            return it->second.signatures;
        }
        ReachabilityResult r = explore_reachable(app, b);
        if (!r.truncated) {
            saturated.insert_or_assign(app.id(), r);
        }
        return r.signatures;
    };

    CoverageReport report;
    std::map<ScenarioKind, std::pair<double, std::size_t>> sums;
    for (const auto& log : logs) {
        auto it = by_id.find(log.app_id);
        if (it == by_id.end()) {
            throw ValidationError("coverage: run for unknown app '" + log.app_id + "'");
        }
        const SignatureSet reachable = oracle(*it->second, budget.value_or(log.events_delivered()));
        const SignatureSet triggered = log.distinct_signatures();
        CoverageEntry e;
        e.app_id = log.app_id;
        e.scenario = log.scenario;
        e.triggered = triggered.size();
        e.oracle = reachable.size();
        std::size_t hit = 0;
        for (const auto& s : triggered) {
            if (reachable.contains(s)) {
                ++hit;
            } else {
                e.outside_oracle.push_back(s);
            }
        }
        e.ratio = reachable.empty() ? 1.0 : static_cast<double>(hit) / static_cast<double>(reachable.size());
        auto& [sum, n] = sums[log.scenario];
        sum += e.ratio;
        ++n;
        report.entries.push_back(std::move(e));
    }
    for (const auto& [kind, acc] : sums) {
        report.mean_ratio[kind] = acc.first / static_cast<double>(acc.second);
    }
    return report;
}

std::string render_coverage(const CoverageReport& report)
{
    std::string out = "oracle coverage (mean per-app ratio)\n";
    std::size_t outside = 0;
    for (const auto& e : report.entries) {
        outside += e.outside_oracle.empty() ? 0 : 1;
    }
    for (const auto& [kind, mean] : report.mean_ratio) {
        std::size_t runs = 0;
        for (const auto& e : report.entries) {
            runs += e.scenario == kind ? 1 : 0;
        }
        out += "  " + pad_right(to_string(kind), 12) + "  " + format_ratio(mean) + "  ("
               + std::to_string(runs) + " runs)\n";
    }
    out += "  runs with signatures outside the oracle: " + std::to_string(outside) + "\n";
    return out;
}

}  // namespace hybridex
