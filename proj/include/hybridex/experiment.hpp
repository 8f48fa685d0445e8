#pragma once

#include "hybridex/device.hpp"
#include "hybridex/orchestrator.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hybridex {

/// Everything one `run` needs. Documented field by field in
/// docs/experiment-config.md.
struct ExperimentConfig {
    std::optional<std::string> corpus;
    std::optional<std::string> catalog;
    std::size_t workers = 1;
    BudgetMode budget_mode = BudgetMode::matched;
    std::uint64_t total_budget = 4000;
    double hybrid_random_share = 0.5;
    SystemSurface surface = SystemSurface::default_layout();
    std::vector<Scenario> scenarios = default_scenarios();

    /// Scenarios after the budget mode is applied.
    [[nodiscard]] std::vector<Scenario> resolved_scenarios() const;

    /// At most one scenario per kind, valid sub-configs and surface.
    void validate() const;
};

/// Throws ParseError on malformed JSON or wrong field types, ValidationError
/// on unknown fields or invalid values. Relative paths are kept as written.
ExperimentConfig parse_experiment(std::string_view text);
ExperimentConfig load_experiment_file(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace hybridex
