#include "hybridex/reachability.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <vector>

namespace hybridex {

namespace {

struct JointState {
    ScreenId screen;
    bool wifi_on = true;
    bool airplane_on = false;
    bool sms = true;
    bool call_log = true;
    std::set<std::string> broadcasts;
    std::set<ScreenId> visited;

    auto key() const
    {
        return std::tie(screen, wifi_on, airplane_on, sms, call_log, broadcasts, visited);
    }
    friend bool operator<(const JointState& a, const JointState& b) { return a.key() < b.key(); }
};

class Explorer {
public:
    explicit Explorer(const AppModel& app) : app_(app)
    {
        for (const auto& t : app.transitions) {
            if (!t.guard) {
                continue;
            }
            for (const auto& a : t.guard->atoms) {
                if (const auto* b = std::get_if<atom::BroadcastReceived>(&a)) {
                    tracked_actions_.insert(b->action);
                }
                if (const auto* v = std::get_if<atom::VisitedScreen>(&a)) {
                    tracked_screens_.insert(v->screen);
                }
            }
        }
        for (const auto& t : app.transitions) {
            outgoing_[t.from_screen].push_back(&t);
        }
    }

    JointState initial() const
    {
        JointState s;
        enter(s, app_.entry_screen().id);
        return s;
    }

    /// Successor states of `s`; emissions of fired transitions go to `emitted`.
    std::vector<JointState> successors(const JointState& s, SignatureSet& emitted) const
    {
        std::vector<JointState> out;
        std::set<std::string> fired_broadcasts;
        auto it = outgoing_.find(s.screen);
        if (it != outgoing_.end()) {
            for (const Transition* t : it->second) {
                const auto* bc = std::get_if<trigger::Broadcast>(&t->trigger);
                JointState next = s;
                if (bc != nullptr) {
                    record_broadcast(next, bc->action);
                }
                if (t->guard && !satisfied(*t->guard, next)) {
                    continue;
                }
                if (bc != nullptr && !(t->guard && t->guard->reads_device_state())) {
                    fired_broadcasts.insert(bc->action);
                }
                if (t->crash) {
                    enter(next, app_.entry_screen().id);
                } else {
                    emitted.insert(t->emits.begin(), t->emits.end());
                    enter(next, t->to_screen);
                }
                out.push_back(std::move(next));
            }
        }
        JointState launched = s;
        enter(launched, app_.entry_screen().id);
        out.push_back(std::move(launched));

        // Broadcasts that are delivered without (or without necessarily)
        // firing a transition still land in the history.
        for (const auto& action : app_.manifest.broadcast_actions) {
            if (fired_broadcasts.contains(action) || !tracked_actions_.contains(action)
                || s.broadcasts.contains(action)) {
                continue;
            }
            JointState next = s;
            record_broadcast(next, action);
            out.push_back(std::move(next));
        }
        return out;
    }

private:
    void enter(JointState& s, const ScreenId& screen) const
    {
        s.screen = screen;
        if (tracked_screens_.contains(screen)) {
            s.visited.insert(screen);
        }
    }

    void record_broadcast(JointState& s, const std::string& action) const
    {
        if (tracked_actions_.contains(action)) {
            s.broadcasts.insert(action);
        }
    }

    static bool satisfied(const Guard& g, const JointState& s)
    {
        return std::all_of(g.atoms.begin(), g.atoms.end(), [&s](const GuardAtom& a) {
            if (std::holds_alternative<atom::WifiOn>(a)) {
                return s.wifi_on;
            }
            if (std::holds_alternative<atom::AirplaneOff>(a)) {
                return !s.airplane_on;
            }
            if (const auto* e = std::get_if<atom::EnvData>(&a)) {
                return e->source == EnvSource::sms ? s.sms : s.call_log;
            }
            if (const auto* b = std::get_if<atom::BroadcastReceived>(&a)) {
                return s.broadcasts.contains(b->action);
            }
            return s.visited.contains(std::get<atom::VisitedScreen>(a).screen);
        });
    }

    const AppModel& app_;
    std::set<std::string> tracked_actions_;
    std::set<ScreenId> tracked_screens_;
    std::map<ScreenId, std::vector<const Transition*>> outgoing_;
};

}  // namespace

ReachabilityResult explore_reachable(const AppModel& app, std::uint64_t budget)
{
    ReachabilityResult result;
    Explorer explorer(app);

    std::set<JointState> seen{explorer.initial()};
    std::vector<JointState> frontier{explorer.initial()};
    while (!frontier.empty() && result.depth < budget) {
        std::vector<JointState> next_frontier;
        for (const auto& s : frontier) {
            for (auto& next : explorer.successors(s, result.signatures)) {
                if (seen.insert(next).second) {
                    next_frontier.push_back(std::move(next));
                }
            }
        }
        ++result.depth;
        frontier = std::move(next_frontier);
    }
    result.states = seen.size();
    result.truncated = !frontier.empty();
    return result;
}

}  // namespace hybridex
