#pragma once

#include "hybridex/device.hpp"
#include "hybridex/random_explorer.hpp"
#include "hybridex/run_log.hpp"
#include "hybridex/state_explorer.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

namespace hybridex {

struct Scenario {
    ScenarioKind kind = ScenarioKind::random_only;
    std::optional<RandomPolicyConfig> random_config;
    std::optional<StatePolicyConfig> state_config;
    bool guard_enabled = true;

    /// hybrid needs both sub-configs; a single-tool scenario needs its own.
    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// The three scenarios with default configs and identical seeds.
std::vector<Scenario> default_scenarios();

/// Queries the config and restores adb, then airplane mode, then Wi-Fi.
/// Afterwards the config is nominal and the session connected.
ConfigSnapshot guard_check(Session& session, std::string_view checkpoint);

/// Fresh session on a nominal device, then the scenario pipeline. Phase
/// failures end up in the log; the call only throws on invalid input.
RunLog run_scenario(const AppModel& app, const Scenario& scenario, const SystemSurface& surface);

/// One RunLog per (app, scenario), ordered by app id then scenario kind
/// (then position in `scenarios`), independent of `worker_count`.
std::vector<RunLog> run_batch(const std::vector<AppModel>& corpus,
                              const std::vector<Scenario>& scenarios,
                              const SystemSurface& surface, std::size_t worker_count);

enum class BudgetMode {
    /// Configs as given; hybrid runs both standalone budgets back to back.
    standalone,
    /// Every scenario gets the same total in cost units (random event = 1).
    matched,
};

std::string_view to_string(BudgetMode mode);
BudgetMode budget_mode_from_string(std::string_view text);

/// In matched mode random_only gets `total` events, state_only `total`
/// units, and hybrid round(total * random_share) random events plus the
/// remaining units for its state phase.
std::vector<Scenario> apply_budget_mode(std::vector<Scenario> scenarios, BudgetMode mode,
                                        std::uint64_t total, double random_share);

/// Writes runs/<app>/<scenario>.runlog.json under `dir`.
void write_runlogs(const std::filesystem::path& dir, const std::vector<RunLog>& logs);

/// Reads every runs/*/*.runlog.json under `dir`, in canonical order.
std::vector<RunLog> read_runlogs(const std::filesystem::path& dir);

}  // namespace hybridex
