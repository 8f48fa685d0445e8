#include "hybridex/random_explorer.hpp"

#include "hybridex/errors.hpp"

#include <cmath>

namespace hybridex {

namespace {

Point random_point(Rng& rng)
{
    return {static_cast<int>(rng.below(kScreenWidth)), static_cast<int>(rng.below(kScreenHeight))};
}

}  // namespace

void RandomPolicyConfig::validate() const
{
    const GestureMix& m = gesture_mix;
    if (m.touch < 0 || m.swipe < 0 || m.key < 0) {
        throw ValidationError("gesture_mix weights must be non-negative");
    }
    if (std::abs(m.touch + m.swipe + m.key - 1.0) > 1e-9) {
        throw ValidationError("gesture_mix weights must sum to 1");
    }
}

ExplorationEvent next_random_event(Rng& rng, const RandomPolicyConfig& config)
{
    const GestureMix& m = config.gesture_mix;
    const double r = rng.unit();
    if (r < m.touch) {
        const Point p = random_point(rng);
        return event::RawGesture{GestureKind::touch, p, p};
    }
    if (r < m.touch + m.swipe || m.key == 0.0) {
        const Point start = random_point(rng);
        const Point end = random_point(rng);
        return event::RawGesture{GestureKind::swipe, start, end};
    }
    return event::KeyPress{kRandomKeyCodes[rng.below(kRandomKeyCodes.size())]};
}

PhaseLog run_random(Session& session, const RandomPolicyConfig& config)
{
    config.validate();
    PhaseLog log;
    log.label = PhaseLabel::random;
    Rng rng(config.seed);

    while (log.events_delivered < config.event_budget) {
        if (session.event_counter() >= kRunEventCap) {
            log.ended_by = PhaseEnd::safety_cap;
            return log;
        }
        if (!session.connected()) {
            log.ended_by = PhaseEnd::disconnected;
            return log;
        }
        const ExplorationEvent ev = next_random_event(rng, config);
        const DeliveryOutcome outcome = session.deliver(ev);
        ++log.events_delivered;
        for (const auto& sig : outcome.emitted) {
            log.emissions.push_back({session.event_counter(), sig});
        }
        if (outcome.status == DeliveryStatus::crashed
            || (outcome.status == DeliveryStatus::crashed_and_relaunched && !config.ignore_crashes)) {
            log.ended_by = PhaseEnd::crashed;
            return log;
        }
    }
    log.ended_by = PhaseEnd::budget;
    return log;
}

}  // namespace hybridex
