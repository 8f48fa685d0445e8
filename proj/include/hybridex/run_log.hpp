#pragma once

#include "hybridex/app_model.hpp"
#include "hybridex/device.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace hybridex {

enum class PhaseLabel { random, state };

enum class PhaseEnd {
    budget,        ///< event budget exhausted
    disconnected,  ///< adb went down mid-phase
    crashed,       ///< app crashed with crashes not ignored
    stuck,         ///< state explorer found nothing left to try
    safety_cap,    ///< per-run hard event cap reached
};

enum class ScenarioKind { random_only, state_only, hybrid };

std::string_view to_string(PhaseLabel label);
std::string_view to_string(PhaseEnd end);
std::string_view to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(std::string_view text);

/// Hard stop on delivered events per run.
inline constexpr std::uint64_t kRunEventCap = 100'000;

struct Emission {
    /// Session event counter value of the delivering event (1-based).
    std::uint64_t event_index = 0;
    ApiSignature signature;

    friend bool operator==(const Emission&, const Emission&) = default;
};

struct PhaseLog {
    PhaseLabel label = PhaseLabel::random;
    std::vector<Emission> emissions;
    std::uint64_t events_delivered = 0;
    PhaseEnd ended_by = PhaseEnd::budget;

    [[nodiscard]] SignatureSet distinct_signatures() const;

    friend bool operator==(const PhaseLog&, const PhaseLog&) = default;
};

/// Config observed at a guard checkpoint, before and after restoring.
struct ConfigSnapshot {
    std::string checkpoint;
    DeviceConfig before;
    DeviceConfig after;

    friend bool operator==(const ConfigSnapshot&, const ConfigSnapshot&) = default;
};

struct EarlyTermination {
    PhaseLabel phase = PhaseLabel::random;
    PhaseEnd reason = PhaseEnd::disconnected;
    std::string detail;

    friend bool operator==(const EarlyTermination&, const EarlyTermination&) = default;
};

struct RunSeeds {
    std::optional<std::uint64_t> random;
    std::optional<std::uint64_t> state;

    friend bool operator==(const RunSeeds&, const RunSeeds&) = default;
};

struct RunLog {
    std::string app_id;
    ScenarioKind scenario = ScenarioKind::random_only;
    RunSeeds seeds;
    std::string rng_algorithm;
    std::vector<PhaseLog> phases;
    std::optional<EarlyTermination> early_termination;
    std::vector<ConfigSnapshot> config_snapshots;

    [[nodiscard]] SignatureSet distinct_signatures() const;
    [[nodiscard]] std::uint64_t events_delivered() const;
    [[nodiscard]] const PhaseLog* phase(PhaseLabel label) const;

    friend bool operator==(const RunLog&, const RunLog&) = default;
};

nlohmann::json to_json(const RunLog& log);
RunLog runlog_from_json(const nlohmann::json& doc);
/// Stable textual form (sorted keys, two-space indent, trailing newline).
std::string serialize_runlog(const RunLog& log);

}  // namespace hybridex
