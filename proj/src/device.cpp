#include "hybridex/device.hpp"

#include "hybridex/errors.hpp"

#include <algorithm>

namespace hybridex {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Widget* hit_test(const Screen& screen, Point p)
{
    for (const auto& w : screen.widgets) {
        if (w.bounds.contains(p)) {
            return &w;
        }
    }
    return nullptr;
}

}  // namespace

void DeviceConfig::apply(ConfigMutation mutation)
{
    switch (mutation) {
    case ConfigMutation::toggle_wifi:
        // The Wi-Fi tile is inert while airplane mode holds the radios off.
        if (!airplane_on) {
            wifi_on = !wifi_on;
        }
        break;
    case ConfigMutation::toggle_airplane:
        airplane_on = !airplane_on;
        if (airplane_on) {
            wifi_on = false;
        }
        break;
    case ConfigMutation::toggle_adb:
        adb_on = !adb_on;
        break;
    }
}

double SystemSurface::entry_probability_weight() const
{
    std::int64_t total = 0;
    for (const auto& h : hazard_regions) {
        total += h.area.area();
    }
    return static_cast<double>(total) / static_cast<double>(kScreenRect.area());
}

void SystemSurface::validate() const
{
    for (std::size_t i = 0; i < hazard_regions.size(); ++i) {
        const Rect& r = hazard_regions[i].area;
        if (r.empty() || !r.within(kScreenRect)) {
            throw ValidationError("hazard region #" + std::to_string(i)
                                  + " is empty or outside the screen");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (hazard_regions[j].area.overlaps(r)) {
                throw ValidationError("hazard regions #" + std::to_string(j) + " and #"
                                      + std::to_string(i) + " overlap");
            }
        }
    }
}

SystemSurface SystemSurface::default_layout()
{
    // 39168 + 2112 + 192 = 41472 px^2 = 2% of 1080x1920.
    return SystemSurface{{
        {{0, 0, 816, 48}, ConfigMutation::toggle_airplane},
        {{816, 0, 860, 48}, ConfigMutation::toggle_wifi},
        {{860, 0, 872, 16}, ConfigMutation::toggle_adb},
    }};
}

std::string_view to_string(EnvPolicy policy)
{
    return policy == EnvPolicy::full ? "full" : "none";
}

EnvPolicy env_policy_from_string(std::string_view text)
{
    if (text == "full") {
        return EnvPolicy::full;
    }
    if (text == "none") {
        return EnvPolicy::none;
    }
    throw ValidationError("unknown environment policy '" + std::string(text) + "'");
}

Environment environment_for(EnvPolicy policy)
{
    const bool on = policy == EnvPolicy::full;
    return {on, on};
}

std::string_view to_string(DeliveryStatus status)
{
    switch (status) {
    case DeliveryStatus::handled: return "handled";
    case DeliveryStatus::ignored: return "ignored";
    case DeliveryStatus::config_changed: return "config_changed";
    case DeliveryStatus::crashed_and_relaunched: return "crashed_and_relaunched";
    case DeliveryStatus::crashed: return "crashed";
    }
    return "?";
}

std::string describe(const ExplorationEvent& ev)
{
    return std::visit(
        overloaded{
            [](const event::WidgetGesture& g) {
                return std::string(to_string(g.kind)) + "(" + g.widget + ")";
            },
            [](const event::RawGesture& g) {
                return std::string(to_string(g.kind)) + "@" + std::to_string(g.start.x) + ","
                       + std::to_string(g.start.y);
            },
            [](const event::KeyPress& k) { return "key(" + std::to_string(k.code) + ")"; },
            [](const event::Broadcast& b) { return "broadcast(" + b.action + ")"; },
            [](const event::Launch&) { return std::string("launch"); },
        },
        ev);
}

Session::Session(const AppModel& app, DeviceConfig config, Environment env, bool ignore_crashes,
                 SystemSurface surface)
    : app_(&app),
      config_(config),
      env_(env),
      ignore_crashes_(ignore_crashes),
      surface_(std::move(surface))
{
    enter(app_->entry_screen().id);
}

void Session::enter(const ScreenId& screen)
{
    current_screen_ = screen;
    visited_.insert(screen);
}

bool Session::guard_satisfied(const Guard& guard) const
{
    return std::all_of(guard.atoms.begin(), guard.atoms.end(), [this](const GuardAtom& a) {
        return std::visit(
            overloaded{
                [this](const atom::WifiOn&) { return config_.wifi_on; },
                [this](const atom::AirplaneOff&) { return !config_.airplane_on; },
                [this](const atom::EnvData& e) {
                    return e.source == EnvSource::sms ? env_.sms_logs_present
                                                      : env_.call_logs_present;
                },
                [this](const atom::BroadcastReceived& b) { return broadcasts_.contains(b.action); },
                [this](const atom::VisitedScreen& v) { return visited_.contains(v.screen); },
            },
            a);
    });
}

DeliveryOutcome Session::deliver(const ExplorationEvent& ev)
{
    if (!connected()) {
        throw DisconnectedError();
    }
    if (std::holds_alternative<event::Launch>(ev)) {
        ++event_counter_;
        relaunch();
        return {DeliveryStatus::handled, {}};
    }
    if (crashed_) {
        throw AppCrashedError();
    }
    ++event_counter_;

    const Screen& screen = *app_->find_screen(current_screen_);
    std::optional<Trigger> trig;

    if (const auto* wg = std::get_if<event::WidgetGesture>(&ev)) {
        const Widget* w = screen.find_widget(wg->widget);
        if (w != nullptr && w->accepted_gestures.contains(wg->kind)) {
            trig = trigger::Gesture{w->id, wg->kind};
        }
    } else if (const auto* raw = std::get_if<event::RawGesture>(&ev)) {
        // System chrome overlays the app.
        for (const auto& hazard : surface_.hazard_regions) {
            if (hazard.area.contains(raw->start)) {
                config_.apply(hazard.mutation);
                return {DeliveryStatus::config_changed, {}};
            }
        }
        const Widget* w = hit_test(screen, raw->start);
        if (w != nullptr && w->accepted_gestures.contains(raw->kind)) {
            trig = trigger::Gesture{w->id, raw->kind};
        }
    } else if (const auto* key = std::get_if<event::KeyPress>(&ev)) {
        trig = trigger::Key{key->code};
    } else if (const auto* bc = std::get_if<event::Broadcast>(&ev)) {
        if (app_->manifest.broadcast_actions.contains(bc->action)) {
            broadcasts_.insert(bc->action);
            trig = trigger::Broadcast{bc->action};
        }
    }

    if (!trig) {
        return {DeliveryStatus::ignored, {}};
    }
    const Transition* t = app_->find_transition(current_screen_, *trig);
    if (t == nullptr || (t->guard && !guard_satisfied(*t->guard))) {
        return {DeliveryStatus::ignored, {}};
    }
    if (t->crash) {
        if (ignore_crashes_) {
            enter(app_->entry_screen().id);
            return {DeliveryStatus::crashed_and_relaunched, {}};
        }
        crashed_ = true;
        return {DeliveryStatus::crashed, {}};
    }
    enter(t->to_screen);
    if (t->side_effect) {
        config_.apply(*t->side_effect);
    }
    return {DeliveryStatus::handled, t->emits};
}

UiDescription Session::current_ui_state() const
{
    if (!connected()) {
        throw DisconnectedError();
    }
    const Screen& screen = *app_->find_screen(current_screen_);
    return {screen.widgets, screen.modal};
}

DeviceConfig Session::apply_restore(RestoreTarget target)
{
    switch (target) {
    case RestoreTarget::adb_on:
        config_.adb_on = true;
        break;
    case RestoreTarget::airplane_off:
        config_.airplane_on = false;
        break;
    case RestoreTarget::wifi_on:
        config_.airplane_on = false;
        config_.wifi_on = true;
        break;
    }
    return config_;
}

void Session::relaunch()
{
    crashed_ = false;
    enter(app_->entry_screen().id);
}

Session install_and_launch(const AppModel& app, DeviceConfig initial_config, EnvPolicy env_policy,
                           bool ignore_crashes, SystemSurface surface)
{
    if (!initial_config.consistent()) {
        throw ValidationError("config-inconsistent: airplane mode on with Wi-Fi on");
    }
    surface.validate();
    return Session(app, initial_config, environment_for(env_policy), ignore_crashes,
                   std::move(surface));
}

DeviceConfig apply_restore_sequence(Session& session, RestoreTarget target)
{
    return session.apply_restore(target);
}

}  // namespace hybridex
