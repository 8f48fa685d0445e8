#pragma once

#include "hybridex/app_model.hpp"
#include "hybridex/geometry.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace hybridex {

struct DeviceConfig {
    bool wifi_on = true;
    bool airplane_on = false;
    bool adb_on = true;

    [[nodiscard]] bool consistent() const { return !(airplane_on && wifi_on); }
    [[nodiscard]] bool nominal() const { return wifi_on && !airplane_on && adb_on; }

    /// Applies one toggle, keeping airplane mode and Wi-Fi mutually exclusive.
    void apply(ConfigMutation mutation);

    friend bool operator==(const DeviceConfig&, const DeviceConfig&) = default;
};

struct HazardRegion {
    Rect area;
    ConfigMutation mutation = ConfigMutation::toggle_airplane;

    friend bool operator==(const HazardRegion&, const HazardRegion&) = default;
};

/// System chrome a raw-coordinate gesture can land in instead of the app.
struct SystemSurface {
    std::vector<HazardRegion> hazard_regions;

    /// Share of the screen covered by hazard regions, i.e. the probability a
    /// uniformly placed gesture escapes into system chrome.
    [[nodiscard]] double entry_probability_weight() const;

    void validate() const;

    /// 2% of the screen in the status-bar strip: a wide quick-settings
    /// airplane tile, a narrow Wi-Fi tile and a tiny developer-options adb
    /// switch.
    static SystemSurface default_layout();
    static SystemSurface none() { return {}; }

    friend bool operator==(const SystemSurface&, const SystemSurface&) = default;
};

enum class EnvPolicy { none, full };

enum class RestoreTarget { wifi_on, airplane_off, adb_on };

std::string_view to_string(EnvPolicy policy);
EnvPolicy env_policy_from_string(std::string_view text);

struct Environment {
    bool sms_logs_present = false;
    bool call_logs_present = false;

    friend bool operator==(const Environment&, const Environment&) = default;
};

namespace event {
/// Gesture aimed at a widget of the current screen by id.
struct WidgetGesture {
    WidgetId widget;
    GestureKind kind = GestureKind::touch;
    friend bool operator==(const WidgetGesture&, const WidgetGesture&) = default;
};
/// Gesture at raw screen coordinates; hit-testing uses `start`.
struct RawGesture {
    GestureKind kind = GestureKind::touch;
    Point start;
    Point end;
    friend bool operator==(const RawGesture&, const RawGesture&) = default;
};
struct KeyPress {
    int code = kKeyBack;
    friend bool operator==(const KeyPress&, const KeyPress&) = default;
};
struct Broadcast {
    std::string action;
    friend bool operator==(const Broadcast&, const Broadcast&) = default;
};
/// Start intent for the app's entry activity; (re)launches the app.
struct Launch {
    friend bool operator==(const Launch&, const Launch&) = default;
};
}  // namespace event

using ExplorationEvent = std::variant<event::WidgetGesture, event::RawGesture, event::KeyPress,
                                      event::Broadcast, event::Launch>;

std::string describe(const ExplorationEvent& ev);

enum class DeliveryStatus {
    handled,
    ignored,
    config_changed,
    crashed_and_relaunched,
    /// Crash while crashes are not ignored; the app stays down.
    crashed,
};

std::string_view to_string(DeliveryStatus status);

struct DeliveryOutcome {
    DeliveryStatus status = DeliveryStatus::ignored;
    std::vector<ApiSignature> emitted;

    friend bool operator==(const DeliveryOutcome&, const DeliveryOutcome&) = default;
};

/// What a UI-aware explorer may observe: the widget hierarchy and modal
/// flag of the foreground screen, never the screen id.
struct UiDescription {
    std::vector<Widget> widgets;
    bool modal = false;

    friend bool operator==(const UiDescription&, const UiDescription&) = default;
};

/// Simulated device with one installed app in the foreground. Single owner;
/// not thread-safe.
class Session {
public:
    /// `app` must outlive the session.
    Session(const AppModel& app, DeviceConfig config, Environment env, bool ignore_crashes,
            SystemSurface surface);

    [[nodiscard]] const AppModel& app() const { return *app_; }
    [[nodiscard]] const ScreenId& current_screen() const { return current_screen_; }
    [[nodiscard]] const DeviceConfig& config() const { return config_; }
    [[nodiscard]] const Environment& env() const { return env_; }
    [[nodiscard]] const std::set<std::string>& broadcasts_received() const { return broadcasts_; }
    [[nodiscard]] const std::set<ScreenId>& visited_screens() const { return visited_; }
    [[nodiscard]] std::uint64_t event_counter() const { return event_counter_; }
    [[nodiscard]] bool ignore_crashes() const { return ignore_crashes_; }
    [[nodiscard]] bool connected() const { return config_.adb_on; }
    [[nodiscard]] bool app_running() const { return !crashed_; }
    [[nodiscard]] const SystemSurface& surface() const { return surface_; }

    /// Delivers one event. Throws DisconnectedError when adb is off and
    /// AppCrashedError when the app is down (only a Launch revives it).
    DeliveryOutcome deliver(const ExplorationEvent& ev);

    [[nodiscard]] UiDescription current_ui_state() const;

    void set_environment(Environment env) { env_ = env; }
    /// Host-side settings navigation driving one flag to its nominal value.
    DeviceConfig apply_restore(RestoreTarget target);
    [[nodiscard]] bool guard_satisfied(const Guard& guard) const;

private:
    void enter(const ScreenId& screen);
    void relaunch();

    const AppModel* app_;
    ScreenId current_screen_;
    DeviceConfig config_;
    Environment env_;
    std::set<std::string> broadcasts_;
    std::set<ScreenId> visited_;
    std::uint64_t event_counter_ = 0;
    bool ignore_crashes_ = true;
    bool crashed_ = false;
    SystemSurface surface_;
};

Environment environment_for(EnvPolicy policy);

/// Throws ValidationError when initial_config has airplane and Wi-Fi both on.
Session install_and_launch(const AppModel& app, DeviceConfig initial_config,
                           EnvPolicy env_policy, bool ignore_crashes, SystemSurface surface);

inline DeliveryOutcome deliver(Session& session, const ExplorationEvent& ev)
{
    return session.deliver(ev);
}

inline DeviceConfig query_config(const Session& session) { return session.config(); }

/// Drives the named flag to its nominal value. Idempotent. Restoring Wi-Fi
/// while airplane mode is on clears airplane mode first, since the two are
/// mutually exclusive.
DeviceConfig apply_restore_sequence(Session& session, RestoreTarget target);

inline UiDescription current_ui_state(const Session& session) { return session.current_ui_state(); }

}  // namespace hybridex
