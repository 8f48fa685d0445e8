#pragma once

#include "hybridex/geometry.hpp"

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace hybridex {

/// Smali-style identifier of a monitored framework call, e.g.
/// "Ljava/io/File;->exists". Opaque to the engine.
class ApiSignature {
public:
    ApiSignature() = default;
    explicit ApiSignature(std::string text) : text_(std::move(text)) {}

    [[nodiscard]] const std::string& text() const { return text_; }
    [[nodiscard]] bool empty() const { return text_.empty(); }

    friend auto operator<=>(const ApiSignature&, const ApiSignature&) = default;
    friend bool operator==(const ApiSignature&, const ApiSignature&) = default;

private:
    std::string text_;
};

using SignatureSet = std::set<ApiSignature>;
using ScreenId = std::string;
using WidgetId = std::string;

enum class WidgetKind { button, text_field, list_item, menu_item, dismiss_control };

/// Gesture kinds a widget can accept. Enumerator order is the tie-break
/// order used by the state-based explorer.
enum class GestureKind { touch, swipe };

inline constexpr int kKeyBack = 4;

struct Widget {
    WidgetId id;
    WidgetKind kind = WidgetKind::button;
    Rect bounds;
    std::set<GestureKind> accepted_gestures;

    friend bool operator==(const Widget&, const Widget&) = default;
};

struct Screen {
    ScreenId id;
    std::vector<Widget> widgets;
    bool modal = false;
    bool is_entry = false;
    /// Modal screen deliberately built without a dismiss-control.
    bool trap = false;
    std::string note;

    [[nodiscard]] const Widget* find_widget(std::string_view widget_id) const;
    [[nodiscard]] bool has_dismiss_control() const;

    friend bool operator==(const Screen&, const Screen&) = default;
};

enum class EnvSource { sms, call_log };

namespace atom {
struct WifiOn {
    friend auto operator<=>(const WifiOn&, const WifiOn&) = default;
};
struct AirplaneOff {
    friend auto operator<=>(const AirplaneOff&, const AirplaneOff&) = default;
};
struct EnvData {
    EnvSource source = EnvSource::sms;
    friend auto operator<=>(const EnvData&, const EnvData&) = default;
};
struct BroadcastReceived {
    std::string action;
    friend auto operator<=>(const BroadcastReceived&, const BroadcastReceived&) = default;
};
struct VisitedScreen {
    ScreenId screen;
    friend auto operator<=>(const VisitedScreen&, const VisitedScreen&) = default;
};
}  // namespace atom

using GuardAtom = std::variant<atom::WifiOn, atom::AirplaneOff, atom::EnvData,
                               atom::BroadcastReceived, atom::VisitedScreen>;

/// Conjunction of atoms. An empty atom list is rejected by validation.
struct Guard {
    std::vector<GuardAtom> atoms;

    /// True when some atom reads Wi-Fi, airplane or environment state.
    [[nodiscard]] bool reads_device_state() const;

    friend bool operator==(const Guard&, const Guard&) = default;
};

namespace trigger {
struct Gesture {
    WidgetId widget;
    GestureKind kind = GestureKind::touch;
    friend auto operator<=>(const Gesture&, const Gesture&) = default;
};
struct Key {
    int code = kKeyBack;
    friend auto operator<=>(const Key&, const Key&) = default;
};
struct Broadcast {
    std::string action;
    friend auto operator<=>(const Broadcast&, const Broadcast&) = default;
};
}  // namespace trigger

using Trigger = std::variant<trigger::Gesture, trigger::Key, trigger::Broadcast>;

enum class ConfigMutation { toggle_wifi, toggle_airplane, toggle_adb };

struct Transition {
    ScreenId from_screen;
    Trigger trigger;
    std::optional<Guard> guard;
    std::vector<ApiSignature> emits;
    ScreenId to_screen;
    std::optional<ConfigMutation> side_effect;
    /// Firing this transition crashes the app; crash transitions emit nothing.
    bool crash = false;

    friend bool operator==(const Transition&, const Transition&) = default;
};

struct Manifest {
    std::string package_id;
    std::set<std::string> broadcast_actions;
    std::set<std::string> permissions;

    friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// Synthetic application: a UI state graph whose transitions emit API
/// signatures. Immutable after load/generation.
class AppModel {
public:
    Manifest manifest;
    std::vector<Screen> screens;
    std::vector<Transition> transitions;

    [[nodiscard]] const std::string& id() const { return manifest.package_id; }
    [[nodiscard]] const Screen& entry_screen() const;
    [[nodiscard]] const Screen* find_screen(std::string_view screen_id) const;

    /// Transition fired by `trig` on `screen`, if any.
    [[nodiscard]] const Transition* find_transition(std::string_view screen,
                                                    const Trigger& trig) const;

    /// Every signature any transition can emit.
    [[nodiscard]] SignatureSet all_signatures() const;

    /// Checks every model invariant; throws ValidationError naming the first
    /// violation.
    void validate() const;

    friend bool operator==(const AppModel&, const AppModel&) = default;
};

/// Parses and validates one app-model document.
/// Throws ParseError on malformed text, ValidationError on invariant breaks.
AppModel load_app(std::string_view document);
AppModel load_app_file(const std::string& path);

nlohmann::json to_json(const AppModel& app);
AppModel app_from_json(const nlohmann::json& doc);
/// Stable textual form (sorted keys, two-space indent, trailing newline).
std::string serialize_app(const AppModel& app);

std::string_view to_string(WidgetKind kind);
std::string_view to_string(GestureKind kind);
std::string_view to_string(ConfigMutation mutation);
std::string_view to_string(EnvSource source);
WidgetKind widget_kind_from_string(std::string_view text);
GestureKind gesture_kind_from_string(std::string_view text);
ConfigMutation config_mutation_from_string(std::string_view text);
EnvSource env_source_from_string(std::string_view text);

std::string describe(const Trigger& trig);

}  // namespace hybridex
