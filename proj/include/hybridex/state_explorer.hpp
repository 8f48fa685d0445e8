#pragma once

#include "hybridex/device.hpp"
#include "hybridex/run_log.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hybridex {

/// Only the dynamic policy is implemented. The static and random policies
/// of the reference tool are recognised by the config parser and rejected.
enum class StatePolicy { dynamic };

struct StatePolicyConfig {
    /// Budget in cost units, not events.
    std::uint64_t event_budget = 4000;
    StatePolicy policy = StatePolicy::dynamic;
    EnvPolicy env_policy = EnvPolicy::full;
    /// Consecutive events without a new UI state before giving up (when
    /// nothing unexplored is reachable either).
    std::uint32_t stuck_threshold = 10;
    /// Budget units one state-based event consumes.
    std::uint32_t cost_per_event = 4;
    /// Recorded in run logs; selection tie-breaks are total, so the
    /// explorer itself is seed-independent.
    std::uint64_t seed = 500;

    void validate() const;

    friend bool operator==(const StatePolicyConfig&, const StatePolicyConfig&) = default;
};

StatePolicy state_policy_from_string(std::string_view text);

struct StaticAnalysisResult {
    std::set<std::string> broadcast_actions;
    std::set<std::string> permissions;

    friend bool operator==(const StaticAnalysisResult&, const StaticAnalysisResult&) = default;
};

/// Manifest projection; the simulator's stand-in for APK analysis.
StaticAnalysisResult static_analyze(const AppModel& app);

/// Populates SMS and call logs per policy. Throws DisconnectedError.
void setup_environment(Session& session, EnvPolicy policy);

/// FNV-1a digest of the observable hierarchy: widget kinds, bounds and
/// accepted gestures in document order, plus the modal flag. Widget ids
/// are not part of it.
struct UiStateSignature {
    std::uint64_t digest = 0;

    friend auto operator<=>(const UiStateSignature&, const UiStateSignature&) = default;
};

UiStateSignature ui_state_signature(const UiDescription& ui);

/// What the explorer can send: a widget gesture, a broadcast, or a key.
using StateAction = Trigger;

ExplorationEvent to_event(const StateAction& action);

/// Per-run memory of observed UI states, the actions already sent in each,
/// and the learned transition graph between them.
class ExplorationMemory {
public:
    struct StateRecord {
        UiDescription ui;
        /// Widget gestures and broadcasts already delivered in this state.
        std::set<StateAction> sent;
        /// Last observed successor per action (keys included).
        std::map<StateAction, UiStateSignature> edges;
    };

    /// Registers an observation; returns true for a never-seen state.
    bool observe(const UiStateSignature& sig, const UiDescription& ui);

    /// Records that `action` was delivered in `from` and led to `to`.
    void record(const UiStateSignature& from, const StateAction& action, const UiStateSignature& to);

    [[nodiscard]] const StateRecord* find(const UiStateSignature& sig) const;
    [[nodiscard]] std::size_t state_count() const { return states_.size(); }
    [[nodiscard]] const std::map<UiStateSignature, StateRecord>& states() const { return states_; }

    /// Unsent widget gestures (document order, then gesture order) followed
    /// by unsent manifest broadcasts (lexicographic).
    [[nodiscard]] std::vector<StateAction> unexplored(const UiStateSignature& sig,
                                                      const StaticAnalysisResult& analysis) const;

    /// First action of a shortest known path from `from` to a state that
    /// still has unexplored actions. Empty when none is reachable or when
    /// `from` itself has unexplored actions.
    [[nodiscard]] std::optional<StateAction> route_to_unexplored(
        const UiStateSignature& from, const StaticAnalysisResult& analysis) const;

    [[nodiscard]] bool has_reachable_unexplored(const UiStateSignature& from,
                                                const StaticAnalysisResult& analysis) const;

private:
    std::map<UiStateSignature, StateRecord> states_;
};

/// Priority: unexplored widget gesture in the current state, then an
/// unexplored manifest broadcast, then a step towards the nearest state
/// with unexplored actions, then BACK.
StateAction choose_action(const UiDescription& ui, const ExplorationMemory& memory,
                          const StaticAnalysisResult& analysis);

inline ExplorationEvent select_next_action(const UiDescription& ui, const ExplorationMemory& memory,
                                           const StaticAnalysisResult& analysis)
{
    return to_event(choose_action(ui, memory, analysis));
}

/// One select/deliver iteration, for tracing and property checks.
struct StateStep {
    UiDescription ui_before;
    UiStateSignature state_before;
    StateAction action;
    DeliveryOutcome outcome;
};

using StateStepObserver = std::function<void(const StateStep&)>;

struct StateRunResult {
    PhaseLog log;
    ExplorationMemory memory;
};

/// Static analysis, environment setup, an app launch intent, then the
/// select/deliver loop. Stops on budget, disconnect, crash, or when stuck.
StateRunResult explore_state_based(Session& session, const StatePolicyConfig& config,
                                   const StateStepObserver& observer = {});

inline PhaseLog run_state_based(Session& session, const StatePolicyConfig& config)
{
    return explore_state_based(session, config).log;
}

}  // namespace hybridex
