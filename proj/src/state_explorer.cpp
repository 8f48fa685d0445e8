#include "hybridex/state_explorer.hpp"

#include "hybridex/errors.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace hybridex {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::string_view bytes)
{
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
}

/// Sort key for edges out of a state: widget gestures in document order
/// then gesture order, broadcasts, keys.
std::tuple<int, std::size_t, int, std::string, int> action_rank(const UiDescription& ui,
                                                                 const StateAction& action)
{
    if (const auto* g = std::get_if<trigger::Gesture>(&action)) {
        std::size_t index = ui.widgets.size();
        for (std::size_t i = 0; i < ui.widgets.size(); ++i) {
            if (ui.widgets[i].id == g->widget) {
                index = i;
                break;
            }
        }
        return {0, index, static_cast<int>(g->kind), g->widget, 0};
    }
    if (const auto* b = std::get_if<trigger::Broadcast>(&action)) {
        return {1, 0, 0, b->action, 0};
    }
    return {2, 0, 0, {}, std::get<trigger::Key>(action).code};
}

}  // namespace

void StatePolicyConfig::validate() const
{
    if (stuck_threshold < 1) {
        throw ValidationError("stuck_threshold must be at least 1");
    }
    if (cost_per_event < 1) {
        throw ValidationError("cost_per_event must be at least 1");
    }
}

StatePolicy state_policy_from_string(std::string_view text)
{
    if (text == "dynamic") {
        return StatePolicy::dynamic;
    }
    if (text == "static" || text == "random") {
        throw ValidationError("state policy '" + std::string(text)
                              + "' is not implemented; only 'dynamic' is supported");
    }
    throw ValidationError("unknown state policy '" + std::string(text) + "'");
}

StaticAnalysisResult static_analyze(const AppModel& app)
{
    return {app.manifest.broadcast_actions, app.manifest.permissions};
}

void setup_environment(Session& session, EnvPolicy policy)
{
    if (!session.connected()) {
        throw DisconnectedError();
    }
    session.set_environment(environment_for(policy));
}

UiStateSignature ui_state_signature(const UiDescription& ui)
{
    std::uint64_t h = kFnvOffset;
    fnv_mix(h, ui.modal ? "modal|" : "plain|");
    for (const auto& w : ui.widgets) {
        std::string part(to_string(w.kind));
        part += ':' + std::to_string(w.bounds.left) + ',' + std::to_string(w.bounds.top) + ','
                + std::to_string(w.bounds.right) + ',' + std::to_string(w.bounds.bottom) + ':';
        for (auto g : w.accepted_gestures) {
            part += to_string(g);
            part += '+';
        }
        part += '|';
        fnv_mix(h, part);
    }
    return {h};
}

ExplorationEvent to_event(const StateAction& action)
{
    if (const auto* g = std::get_if<trigger::Gesture>(&action)) {
        return event::WidgetGesture{g->widget, g->kind};
    }
    if (const auto* b = std::get_if<trigger::Broadcast>(&action)) {
        return event::Broadcast{b->action};
    }
    return event::KeyPress{std::get<trigger::Key>(action).code};
}

// ---------------------------------------------------------------------------
// ExplorationMemory

bool ExplorationMemory::observe(const UiStateSignature& sig, const UiDescription& ui)
{
    auto [it, inserted] = states_.try_emplace(sig);
    if (inserted) {
        it->second.ui = ui;
    }
    return inserted;
}

void ExplorationMemory::record(const UiStateSignature& from, const StateAction& action,
                               const UiStateSignature& to)
{
    StateRecord& rec = states_[from];
    if (!std::holds_alternative<trigger::Key>(action)) {
        rec.sent.insert(action);
    }
    rec.edges[action] = to;
}

const ExplorationMemory::StateRecord* ExplorationMemory::find(const UiStateSignature& sig) const
{
    auto it = states_.find(sig);
    return it == states_.end() ? nullptr : &it->second;
}

std::vector<StateAction> ExplorationMemory::unexplored(const UiStateSignature& sig,
                                                       const StaticAnalysisResult& analysis) const
{
    std::vector<StateAction> out;
    const StateRecord* rec = find(sig);
    if (rec == nullptr) {
        return out;
    }
    for (const auto& w : rec->ui.widgets) {
        for (auto g : w.accepted_gestures) {
            StateAction a = trigger::Gesture{w.id, g};
            if (!rec->sent.contains(a)) {
                out.push_back(std::move(a));
            }
        }
    }
    for (const auto& action : analysis.broadcast_actions) {
        StateAction a = trigger::Broadcast{action};
        if (!rec->sent.contains(a)) {
            out.push_back(std::move(a));
        }
    }
    return out;
}

std::optional<StateAction> ExplorationMemory::route_to_unexplored(
    const UiStateSignature& from, const StaticAnalysisResult& analysis) const
{
    if (find(from) == nullptr || !unexplored(from, analysis).empty()) {
        return std::nullopt;
    }
    std::set<UiStateSignature> seen{from};
    std::deque<std::pair<UiStateSignature, std::optional<StateAction>>> queue{{from, std::nullopt}};
    while (!queue.empty()) {
        auto [state, first] = queue.front();
        queue.pop_front();
        const StateRecord* rec = find(state);
        if (rec == nullptr) {
            continue;
        }
        std::vector<std::pair<StateAction, UiStateSignature>> edges(rec->edges.begin(),
                                                                    rec->edges.end());
        std::sort(edges.begin(), edges.end(), [&rec](const auto& a, const auto& b) {
            return action_rank(rec->ui, a.first) < action_rank(rec->ui, b.first);
        });
        for (const auto& [action, next] : edges) {
            if (!seen.insert(next).second) {
                continue;
            }
            std::optional<StateAction> step = first ? first : std::optional<StateAction>(action);
            if (!unexplored(next, analysis).empty()) {
                return step;
            }
            queue.emplace_back(next, step);
        }
    }
    return std::nullopt;
}

bool ExplorationMemory::has_reachable_unexplored(const UiStateSignature& from,
                                                 const StaticAnalysisResult& analysis) const
{
    return !unexplored(from, analysis).empty() || route_to_unexplored(from, analysis).has_value();
}

// ---------------------------------------------------------------------------
// selection and the run loop

StateAction choose_action(const UiDescription& ui, const ExplorationMemory& memory,
                          const StaticAnalysisResult& analysis)
{
    const UiStateSignature sig = ui_state_signature(ui);
    const auto* rec = memory.find(sig);
    auto sent = [rec](const StateAction& a) { return rec != nullptr && rec->sent.contains(a); };

    for (const auto& w : ui.widgets) {
        for (auto g : w.accepted_gestures) {
            StateAction a = trigger::Gesture{w.id, g};
            if (!sent(a)) {
                return a;
            }
        }
    }
    for (const auto& action : analysis.broadcast_actions) {
        StateAction a = trigger::Broadcast{action};
        if (!sent(a)) {
            return a;
        }
    }
    if (auto step = memory.route_to_unexplored(sig, analysis)) {
        return *step;
    }
    return trigger::Key{kKeyBack};
}

StateRunResult explore_state_based(Session& session, const StatePolicyConfig& config,
                                   const StateStepObserver& observer)
{
    config.validate();
    StateRunResult result;
    PhaseLog& log = result.log;
    ExplorationMemory& memory = result.memory;
    log.label = PhaseLabel::state;

    auto affordable = [&] {
        return (log.events_delivered + 1) * config.cost_per_event <= config.event_budget;
    };
    auto stop = [&](PhaseEnd why) {
        log.ended_by = why;
        return std::move(result);
    };

    if (!session.connected()) {
        return stop(PhaseEnd::disconnected);
    }
    const StaticAnalysisResult analysis = static_analyze(session.app());
    setup_environment(session, config.env_policy);

    if (!affordable()) {
        return stop(PhaseEnd::budget);
    }
    session.deliver(event::Launch{});
    ++log.events_delivered;

    UiDescription ui = session.current_ui_state();
    UiStateSignature sig = ui_state_signature(ui);
    memory.observe(sig, ui);
    std::uint32_t without_new_state = 0;

    while (true) {
        if (!affordable()) {
            return stop(PhaseEnd::budget);
        }
        if (session.event_counter() >= kRunEventCap) {
            return stop(PhaseEnd::safety_cap);
        }
        const StateAction action = choose_action(ui, memory, analysis);
        const DeliveryOutcome outcome = session.deliver(to_event(action));
        ++log.events_delivered;
        for (const auto& s : outcome.emitted) {
            log.emissions.push_back({session.event_counter(), s});
        }
        if (observer) {
            observer(StateStep{ui, sig, action, outcome});
        }
        if (outcome.status == DeliveryStatus::crashed) {
            memory.record(sig, action, sig);
            return stop(PhaseEnd::crashed);
        }
        if (!session.connected()) {
            memory.record(sig, action, sig);
            return stop(PhaseEnd::disconnected);
        }

        UiDescription next_ui = session.current_ui_state();
        const UiStateSignature next_sig = ui_state_signature(next_ui);
        const bool fresh = memory.observe(next_sig, next_ui);
        memory.record(sig, action, next_sig);
        ui = std::move(next_ui);
        sig = next_sig;

        without_new_state = fresh ? 0 : without_new_state + 1;
        if (without_new_state >= config.stuck_threshold
            && !memory.has_reachable_unexplored(sig, analysis)) {
            return stop(PhaseEnd::stuck);
        }
    }
}

}  // namespace hybridex
