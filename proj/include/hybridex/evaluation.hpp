#pragma once

#include "hybridex/app_model.hpp"
#include "hybridex/features.hpp"
#include "hybridex/run_log.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hybridex {

inline constexpr std::array<ScenarioKind, 3> kAllScenarios{
    ScenarioKind::random_only, ScenarioKind::state_only, ScenarioKind::hybrid};

struct SignatureCounts {
    ApiSignature signature;
    /// Apps whose cell is 1, indexed by ScenarioKind.
    std::array<std::size_t, 3> apps{};

    [[nodiscard]] std::size_t count(ScenarioKind kind) const { return apps[static_cast<std::size_t>(kind)]; }
    [[nodiscard]] std::int64_t difference(ScenarioKind first, ScenarioKind second) const
    {
        return static_cast<std::int64_t>(count(first)) - static_cast<std::int64_t>(count(second));
    }

    friend bool operator==(const SignatureCounts&, const SignatureCounts&) = default;
};

struct ScenarioComparison {
    /// Scenarios that had a matrix; counts for the others are zero.
    std::vector<ScenarioKind> scenarios;
    std::size_t app_count = 0;
    /// Catalog order.
    std::vector<SignatureCounts> rows;

    [[nodiscard]] bool has(ScenarioKind kind) const;
    /// Sum of a scenario's column sums.
    [[nodiscard]] std::size_t total(ScenarioKind kind) const;
};

/// Column sums per scenario. All matrices must share columns and app ids;
/// throws ValidationError ("mismatched-catalog" / "mismatched-apps").
ScenarioComparison compare_scenarios(const std::map<ScenarioKind, FeatureMatrix>& matrices);

struct ScenarioPair {
    ScenarioKind first;
    ScenarioKind second;

    friend bool operator==(const ScenarioPair&, const ScenarioPair&) = default;
};

std::string pair_label(ScenarioPair pair);

struct TopKRow {
    ApiSignature signature;
    std::size_t count_first = 0;
    std::size_t count_second = 0;
    std::int64_t difference = 0;
};

struct TopKTable {
    ScenarioPair pair;
    std::size_t k = 0;
    std::vector<TopKRow> rows;
};

/// Signatures where `first` beats `second`, by descending difference then
/// ascending signature text, at most k rows. Throws ValidationError for k = 0.
TopKTable top_k_table(const ScenarioComparison& comparison, ScenarioPair pair, std::size_t k);

std::string render_text(const TopKTable& table);
std::string render_csv(const TopKTable& table);

/// The report's table order: hybrid over random, hybrid over state, state
/// over random, random over state.
std::vector<ScenarioPair> report_pairs();

struct PairCount {
    ScenarioPair pair;
    std::size_t signatures = 0;
};

struct SummaryStatistics {
    /// Signatures whose counts are not all equal across the compared scenarios.
    std::size_t signatures_with_difference = 0;
    /// Each ordered pair with the number of signatures where first > second.
    std::vector<PairCount> strictly_greater;
};

SummaryStatistics summary_statistics(const ScenarioComparison& comparison);
std::string render_summary(const SummaryStatistics& summary);

struct CoverageEntry {
    std::string app_id;
    ScenarioKind scenario = ScenarioKind::random_only;
    std::size_t triggered = 0;
    std::size_t oracle = 0;
    double ratio = 1.0;
    /// Triggered signatures the oracle did not predict; always empty unless
    /// the oracle is unsound.
    std::vector<ApiSignature> outside_oracle;
};

struct CoverageReport {
    std::vector<CoverageEntry> entries;
    std::map<ScenarioKind, double> mean_ratio;
};

/// Per run, |triggered ∩ oracle| / |oracle|, or 1 when the oracle set is
/// empty. The oracle budget is `budget` when given, else the run's own
/// delivered-event count. Throws ValidationError for a run whose app is
/// not in the corpus.
CoverageReport coverage_vs_oracle(const std::vector<RunLog>& logs,
                                  const std::vector<AppModel>& corpus,
                                  std::optional<std::uint64_t> budget = std::nullopt);

std::string render_coverage(const CoverageReport& report);

}  // namespace hybridex
