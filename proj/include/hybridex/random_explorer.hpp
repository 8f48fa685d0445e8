#pragma once

#include "hybridex/device.hpp"
#include "hybridex/rng.hpp"
#include "hybridex/run_log.hpp"

#include <array>
#include <cstdint>

namespace hybridex {

struct GestureMix {
    double touch = 0.6;
    double swipe = 0.25;
    double key = 0.15;

    friend bool operator==(const GestureMix&, const GestureMix&) = default;
};

/// Key codes a random run presses: BACK, the DPAD cluster, ENTER and MENU.
inline constexpr std::array<int, 8> kRandomKeyCodes{4, 19, 20, 21, 22, 23, 66, 82};

struct RandomPolicyConfig {
    std::uint64_t seed = 500;
    std::uint64_t event_budget = 4000;
    GestureMix gesture_mix;
    bool ignore_crashes = true;

    /// Weights must be non-negative and sum to 1.
    void validate() const;

    friend bool operator==(const RandomPolicyConfig&, const RandomPolicyConfig&) = default;
};

/// Draws one raw-coordinate gesture or key press. Coordinates are uniform
/// over the whole screen, system chrome included. Never a broadcast.
ExplorationEvent next_random_event(Rng& rng, const RandomPolicyConfig& config);

/// Streams seeded random events into the session until the budget is spent
/// or the device disconnects.
PhaseLog run_random(Session& session, const RandomPolicyConfig& config);

}  // namespace hybridex
