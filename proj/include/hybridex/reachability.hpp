#pragma once

#include "hybridex/app_model.hpp"

#include <cstdint>

namespace hybridex {

struct ReachabilityResult {
    SignatureSet signatures;
    /// Breadth-first levels expanded.
    std::uint64_t depth = 0;
    /// Distinct joint states discovered.
    std::size_t states = 0;
    /// The budget ran out before the state space reached a fixpoint, so
    /// longer sequences might still emit more.
    bool truncated = false;
};

/// Exhaustive breadth-first search over (screen, device flags, received
/// broadcasts, visited screens) for every signature some event sequence of
/// length <= budget can emit. The event alphabet is every trigger the app
/// declares, every manifest broadcast, and the app launch intent.
///
/// Device flags are pinned to the most permissive policy (Wi-Fi on,
/// airplane off, environment data present) and transition side effects on
/// the config are not tracked. Guards are conjunctions of positive atoms,
/// so this over-approximates any real run. A broadcast whose transition is
/// guarded on device state may also be taken as "delivered but not fired",
/// covering runs where that guard failed on the real device.
ReachabilityResult explore_reachable(const AppModel& app, std::uint64_t budget);

inline SignatureSet reachable_behaviors(const AppModel& app, std::uint64_t budget)
{
    return explore_reachable(app, budget).signatures;
}

}  // namespace hybridex
