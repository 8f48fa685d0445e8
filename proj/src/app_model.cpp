#include "hybridex/app_model.hpp"

#include "hybridex/errors.hpp"
#include "hybridex/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace hybridex {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void invalid(const std::string& what)
{
    throw ValidationError(what);
}

[[noreturn]] void malformed(const std::string& what)
{
    throw ParseError(what);
}

const json& require(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key)) {
        malformed(where + ": missing key '" + key + "'");
    }
    return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const std::string& where)
{
    const json& v = require(obj, key, where);
    if (!v.is_string()) {
        malformed(where + ": '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

bool optional_bool(const json& obj, const char* key, const std::string& where)
{
    if (!obj.contains(key)) {
        return false;
    }
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
        malformed(where + ": '" + key + "' must be a boolean");
    }
    return v.get<bool>();
}

std::set<std::string> string_set(const json& v, const std::string& where)
{
    if (!v.is_array()) {
        malformed(where + " must be an array of strings");
    }
    std::set<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) {
            malformed(where + " must be an array of strings");
        }
        out.insert(e.get<std::string>());
    }
    return out;
}

Rect rect_from_json(const json& v, const std::string& where)
{
    if (!v.is_array() || v.size() != 4
        || !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number_integer(); })) {
        malformed(where + ": bounds must be [left, top, right, bottom] integers");
    }
    return {v[0].get<int>(), v[1].get<int>(), v[2].get<int>(), v[3].get<int>()};
}

GuardAtom atom_from_json(const json& v, const std::string& where)
{
    const std::string kind = require_string(v, "atom", where);
    if (kind == "wifi_on") {
        return atom::WifiOn{};
    }
    if (kind == "airplane_off") {
        return atom::AirplaneOff{};
    }
    try {
        if (kind == "env_data") {
            return atom::EnvData{env_source_from_string(require_string(v, "source", where))};
        }
    } catch (const ValidationError& e) {
        malformed(where + ": " + e.what());
    }
    if (kind == "broadcast_received") {
        return atom::BroadcastReceived{require_string(v, "action", where)};
    }
    if (kind == "visited_screen") {
        return atom::VisitedScreen{require_string(v, "screen", where)};
    }
    malformed(where + ": unknown guard atom '" + kind + "'");
}

json atom_to_json(const GuardAtom& a)
{
    return std::visit(
        overloaded{
            [](const atom::WifiOn&) { return json{{"atom", "wifi_on"}}; },
            [](const atom::AirplaneOff&) { return json{{"atom", "airplane_off"}}; },
            [](const atom::EnvData& e) {
                return json{{"atom", "env_data"}, {"source", to_string(e.source)}};
            },
            [](const atom::BroadcastReceived& b) {
                return json{{"atom", "broadcast_received"}, {"action", b.action}};
            },
            [](const atom::VisitedScreen& s) {
                return json{{"atom", "visited_screen"}, {"screen", s.screen}};
            },
        },
        a);
}

Trigger trigger_from_json(const json& v, const std::string& where)
{
    const std::string type = require_string(v, "type", where);
    try {
        if (type == "gesture") {
            return trigger::Gesture{require_string(v, "widget", where),
                                    gesture_kind_from_string(require_string(v, "gesture", where))};
        }
    } catch (const ValidationError& e) {
        malformed(where + ": " + e.what());
    }
    if (type == "key") {
        const json& code = require(v, "code", where);
        if (!code.is_number_integer()) {
            malformed(where + ": key code must be an integer");
        }
        return trigger::Key{code.get<int>()};
    }
    if (type == "broadcast") {
        return trigger::Broadcast{require_string(v, "action", where)};
    }
    malformed(where + ": unknown trigger type '" + type + "'");
}

json trigger_to_json(const Trigger& t)
{
    return std::visit(
        overloaded{
            [](const trigger::Gesture& g) {
                return json{{"type", "gesture"}, {"widget", g.widget}, {"gesture", to_string(g.kind)}};
            },
            [](const trigger::Key& k) { return json{{"type", "key"}, {"code", k.code}}; },
            [](const trigger::Broadcast& b) {
                return json{{"type", "broadcast"}, {"action", b.action}};
            },
        },
        t);
}

}  // namespace

// ---------------------------------------------------------------------------
// enum <-> string

std::string_view to_string(WidgetKind kind)
{
    switch (kind) {
    case WidgetKind::button: return "button";
    case WidgetKind::text_field: return "text-field";
    case WidgetKind::list_item: return "list-item";
    case WidgetKind::menu_item: return "menu-item";
    case WidgetKind::dismiss_control: return "dismiss-control";
    }
    return "?";
}

std::string_view to_string(GestureKind kind)
{
    return kind == GestureKind::touch ? "touch" : "swipe";
}

std::string_view to_string(ConfigMutation mutation)
{
    switch (mutation) {
    case ConfigMutation::toggle_wifi: return "toggle_wifi";
    case ConfigMutation::toggle_airplane: return "toggle_airplane";
    case ConfigMutation::toggle_adb: return "toggle_adb";
    }
    return "?";
}

std::string_view to_string(EnvSource source)
{
    return source == EnvSource::sms ? "sms" : "call_log";
}

WidgetKind widget_kind_from_string(std::string_view text)
{
    for (auto k : {WidgetKind::button, WidgetKind::text_field, WidgetKind::list_item,
                   WidgetKind::menu_item, WidgetKind::dismiss_control}) {
        if (to_string(k) == text) {
            return k;
        }
    }
    invalid("unknown widget kind '" + std::string(text) + "'");
}

GestureKind gesture_kind_from_string(std::string_view text)
{
    if (text == "touch") {
        return GestureKind::touch;
    }
    if (text == "swipe") {
        return GestureKind::swipe;
    }
    invalid("unknown gesture kind '" + std::string(text) + "'");
}

ConfigMutation config_mutation_from_string(std::string_view text)
{
    for (auto m : {ConfigMutation::toggle_wifi, ConfigMutation::toggle_airplane,
                   ConfigMutation::toggle_adb}) {
        if (to_string(m) == text) {
            return m;
        }
    }
    invalid("unknown config mutation '" + std::string(text) + "'");
}

EnvSource env_source_from_string(std::string_view text)
{
    if (text == "sms") {
        return EnvSource::sms;
    }
    if (text == "call_log") {
        return EnvSource::call_log;
    }
    invalid("unknown env source '" + std::string(text) + "'");
}

std::string describe(const Trigger& trig)
{
    return std::visit(
        overloaded{
            [](const trigger::Gesture& g) {
                return "gesture(" + g.widget + ", " + std::string(to_string(g.kind)) + ")";
            },
            [](const trigger::Key& k) { return "key(" + std::to_string(k.code) + ")"; },
            [](const trigger::Broadcast& b) { return "broadcast(" + b.action + ")"; },
        },
        trig);
}

// ---------------------------------------------------------------------------
// model queries

const Widget* Screen::find_widget(std::string_view widget_id) const
{
    for (const auto& w : widgets) {
        if (w.id == widget_id) {
            return &w;
        }
    }
    return nullptr;
}

bool Screen::has_dismiss_control() const
{
    return std::any_of(widgets.begin(), widgets.end(),
                       [](const Widget& w) { return w.kind == WidgetKind::dismiss_control; });
}

bool Guard::reads_device_state() const
{
    return std::any_of(atoms.begin(), atoms.end(), [](const GuardAtom& a) {
        return std::holds_alternative<atom::WifiOn>(a) || std::holds_alternative<atom::AirplaneOff>(a)
               || std::holds_alternative<atom::EnvData>(a);
    });
}

const Screen& AppModel::entry_screen() const
{
    for (const auto& s : screens) {
        if (s.is_entry) {
            return s;
        }
    }
    invalid("app '" + id() + "' has no entry screen");
}

const Screen* AppModel::find_screen(std::string_view screen_id) const
{
    for (const auto& s : screens) {
        if (s.id == screen_id) {
            return &s;
        }
    }
    return nullptr;
}

const Transition* AppModel::find_transition(std::string_view screen, const Trigger& trig) const
{
    for (const auto& t : transitions) {
        if (t.from_screen == screen && t.trigger == trig) {
            return &t;
        }
    }
    return nullptr;
}

SignatureSet AppModel::all_signatures() const
{
    SignatureSet out;
    for (const auto& t : transitions) {
        out.insert(t.emits.begin(), t.emits.end());
    }
    return out;
}

void AppModel::validate() const
{
    const std::string app = "app '" + manifest.package_id + "'";
    if (manifest.package_id.empty()) {
        invalid("manifest.package_id is empty");
    }
    for (const auto& action : manifest.broadcast_actions) {
        if (action.empty()) {
            invalid(app + ": empty broadcast action in manifest");
        }
    }
    if (screens.empty()) {
        invalid(app + ": no screens");
    }

    std::set<ScreenId> screen_ids;
    int entries = 0;
    for (const auto& s : screens) {
        const std::string where = app + " screen '" + s.id + "'";
        if (s.id.empty()) {
            invalid(app + ": screen with empty id");
        }
        if (!screen_ids.insert(s.id).second) {
            invalid(app + ": duplicate screen id '" + s.id + "'");
        }
        entries += s.is_entry ? 1 : 0;
        if (s.trap && !s.modal) {
            invalid(where + ": trap flag set on a non-modal screen");
        }
        if (s.modal && !s.trap && !s.has_dismiss_control()) {
            invalid(where + ": modal screen has no dismiss-control and is not marked as a trap");
        }
        std::set<WidgetId> widget_ids;
        for (std::size_t i = 0; i < s.widgets.size(); ++i) {
            const Widget& w = s.widgets[i];
            if (w.id.empty()) {
                invalid(where + ": widget with empty id");
            }
            if (!widget_ids.insert(w.id).second) {
                invalid(where + ": duplicate widget id '" + w.id + "'");
            }
            if (w.bounds.empty() || !w.bounds.within(kScreenRect)) {
                invalid(where + ": widget '" + w.id + "' bounds outside the screen rectangle");
            }
            if (w.accepted_gestures.empty()) {
                invalid(where + ": widget '" + w.id + "' accepts no gestures");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (s.widgets[j].bounds.overlaps(w.bounds)) {
                    invalid(where + ": widgets '" + s.widgets[j].id + "' and '" + w.id
                            + "' overlap");
                }
            }
        }
    }
    if (entries != 1) {
        invalid(app + ": expected exactly one entry screen, found " + std::to_string(entries));
    }

    std::set<std::pair<ScreenId, Trigger>> seen_triggers;
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        const Transition& t = transitions[i];
        const std::string where = app + " transition #" + std::to_string(i);
        const Screen* from = find_screen(t.from_screen);
        if (from == nullptr) {
            invalid(where + ": dangling reference to from_screen '" + t.from_screen + "'");
        }
        if (find_screen(t.to_screen) == nullptr) {
            invalid(where + ": dangling reference to to_screen '" + t.to_screen + "'");
        }
        if (!seen_triggers.emplace(t.from_screen, t.trigger).second) {
            invalid(where + ": duplicate trigger " + describe(t.trigger) + " on screen '"
                    + t.from_screen + "'");
        }
        if (const auto* g = std::get_if<trigger::Gesture>(&t.trigger)) {
            const Widget* w = from->find_widget(g->widget);
            if (w == nullptr) {
                invalid(where + ": dangling reference to widget '" + g->widget + "' on screen '"
                        + t.from_screen + "'");
            }
            if (!w->accepted_gestures.contains(g->kind)) {
                invalid(where + ": widget '" + g->widget + "' does not accept "
                        + std::string(to_string(g->kind)));
            }
        }
        if (const auto* b = std::get_if<trigger::Broadcast>(&t.trigger)) {
            if (!manifest.broadcast_actions.contains(b->action)) {
                invalid(where + ": broadcast action '" + b->action + "' not declared in manifest");
            }
        }
        std::set<ApiSignature> local;
        for (const auto& sig : t.emits) {
            if (sig.empty()) {
                invalid(where + ": empty API signature");
            }
            if (!local.insert(sig).second) {
                invalid(where + ": signature '" + sig.text() + "' emitted twice");
            }
        }
        if (t.crash && !t.emits.empty()) {
            invalid(where + ": crash transitions cannot emit signatures");
        }
        if (t.guard) {
            if (t.guard->atoms.empty()) {
                invalid(where + ": guard has no atoms");
            }
            for (const auto& a : t.guard->atoms) {
                if (const auto* b = std::get_if<atom::BroadcastReceived>(&a)) {
                    if (!manifest.broadcast_actions.contains(b->action)) {
                        invalid(where + ": guard reads broadcast '" + b->action
                                + "' not declared in manifest");
                    }
                }
                if (const auto* v = std::get_if<atom::VisitedScreen>(&a)) {
                    if (find_screen(v->screen) == nullptr) {
                        invalid(where + ": guard reads unknown screen '" + v->screen + "'");
                    }
                }
            }
        }
    }

    // Every screen must sit in the entry screen's weakly connected component.
    std::map<ScreenId, std::vector<ScreenId>> adjacency;
    for (const auto& t : transitions) {
        adjacency[t.from_screen].push_back(t.to_screen);
        adjacency[t.to_screen].push_back(t.from_screen);
    }
    std::set<ScreenId> component{entry_screen().id};
    std::vector<ScreenId> frontier{entry_screen().id};
    while (!frontier.empty()) {
        ScreenId cur = frontier.back();
        frontier.pop_back();
        for (const auto& next : adjacency[cur]) {
            if (component.insert(next).second) {
                frontier.push_back(next);
            }
        }
    }
    for (const auto& s : screens) {
        if (!component.contains(s.id)) {
            invalid(app + ": screen '" + s.id + "' is disconnected from the entry screen");
        }
    }
}

// ---------------------------------------------------------------------------
// JSON

json to_json(const AppModel& app)
{
    json screens = json::array();
    for (const auto& s : app.screens) {
        json widgets = json::array();
        for (const auto& w : s.widgets) {
            json gestures = json::array();
            for (auto g : w.accepted_gestures) {
                gestures.push_back(to_string(g));
            }
            widgets.push_back({{"id", w.id},
                               {"kind", to_string(w.kind)},
                               {"bounds", {w.bounds.left, w.bounds.top, w.bounds.right, w.bounds.bottom}},
                               {"accepted_gestures", gestures}});
        }
        json screen{{"id", s.id}, {"widgets", widgets}, {"modal", s.modal}, {"is_entry", s.is_entry}};
        if (s.trap) {
            screen["trap"] = true;
        }
        if (!s.note.empty()) {
            screen["note"] = s.note;
        }
        screens.push_back(std::move(screen));
    }

    json transitions = json::array();
    for (const auto& t : app.transitions) {
        json emits = json::array();
        for (const auto& sig : t.emits) {
            emits.push_back(sig.text());
        }
        json guard = nullptr;
        if (t.guard) {
            guard = json::array();
            for (const auto& a : t.guard->atoms) {
                guard.push_back(atom_to_json(a));
            }
        }
        json tr{{"from_screen", t.from_screen},
                {"trigger", trigger_to_json(t.trigger)},
                {"guard", guard},
                {"emits", emits},
                {"to_screen", t.to_screen},
                {"side_effect", t.side_effect ? json(to_string(*t.side_effect)) : json(nullptr)}};
        if (t.crash) {
            tr["crash"] = true;
        }
        transitions.push_back(std::move(tr));
    }

    return json{{"manifest",
                 {{"package_id", app.manifest.package_id},
                  {"broadcast_actions", app.manifest.broadcast_actions},
                  {"permissions", app.manifest.permissions}}},
                {"screens", screens},
                {"transitions", transitions}};
}

AppModel app_from_json(const json& doc)
{
    if (!doc.is_object()) {
        malformed("app document must be a JSON object");
    }
    AppModel app;
    const json& manifest = require(doc, "manifest", "document");
    app.manifest.package_id = require_string(manifest, "package_id", "manifest");
    app.manifest.broadcast_actions =
        string_set(require(manifest, "broadcast_actions", "manifest"), "manifest.broadcast_actions");
    app.manifest.permissions =
        string_set(require(manifest, "permissions", "manifest"), "manifest.permissions");

    const json& screens = require(doc, "screens", "document");
    if (!screens.is_array()) {
        malformed("'screens' must be an array");
    }
    for (std::size_t i = 0; i < screens.size(); ++i) {
        const std::string where = "screens[" + std::to_string(i) + "]";
        const json& js = screens[i];
        Screen s;
        s.id = require_string(js, "id", where);
        s.modal = optional_bool(js, "modal", where);
        s.is_entry = optional_bool(js, "is_entry", where);
        s.trap = optional_bool(js, "trap", where);
        if (js.contains("note")) {
            s.note = require_string(js, "note", where);
        }
        const json& widgets = require(js, "widgets", where);
        if (!widgets.is_array()) {
            malformed(where + ": 'widgets' must be an array");
        }
        for (std::size_t j = 0; j < widgets.size(); ++j) {
            const std::string wwhere = where + ".widgets[" + std::to_string(j) + "]";
            const json& jw = widgets[j];
            Widget w;
            w.id = require_string(jw, "id", wwhere);
            try {
                w.kind = widget_kind_from_string(require_string(jw, "kind", wwhere));
                for (const auto& g : string_set(require(jw, "accepted_gestures", wwhere),
                                                wwhere + ".accepted_gestures")) {
                    w.accepted_gestures.insert(gesture_kind_from_string(g));
                }
            } catch (const ValidationError& e) {
                malformed(wwhere + ": " + e.what());
            }
            w.bounds = rect_from_json(require(jw, "bounds", wwhere), wwhere);
            s.widgets.push_back(std::move(w));
        }
        app.screens.push_back(std::move(s));
    }

    const json& transitions = require(doc, "transitions", "document");
    if (!transitions.is_array()) {
        malformed("'transitions' must be an array");
    }
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        const std::string where = "transitions[" + std::to_string(i) + "]";
        const json& jt = transitions[i];
        Transition t;
        t.from_screen = require_string(jt, "from_screen", where);
        t.to_screen = require_string(jt, "to_screen", where);
        t.trigger = trigger_from_json(require(jt, "trigger", where), where + ".trigger");
        if (jt.contains("guard") && !jt.at("guard").is_null()) {
            const json& g = jt.at("guard");
            if (!g.is_array()) {
                malformed(where + ": guard must be an array of atoms or null");
            }
            Guard guard;
            for (const auto& a : g) {
                guard.atoms.push_back(atom_from_json(a, where + ".guard"));
            }
            t.guard = std::move(guard);
        }
        const json& emits = require(jt, "emits", where);
        if (!emits.is_array()) {
            malformed(where + ": emits must be an array");
        }
        for (const auto& e : emits) {
            if (!e.is_string()) {
                malformed(where + ": emits must contain strings");
            }
            t.emits.emplace_back(e.get<std::string>());
        }
        if (jt.contains("side_effect") && !jt.at("side_effect").is_null()) {
            try {
                t.side_effect = config_mutation_from_string(require_string(jt, "side_effect", where));
            } catch (const ValidationError& e) {
                malformed(where + ": " + e.what());
            }
        }
        t.crash = optional_bool(jt, "crash", where);
        app.transitions.push_back(std::move(t));
    }
    return app;
}

AppModel load_app(std::string_view document)
{
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("app document: ") + e.what());
    }
    AppModel app = app_from_json(doc);
    app.validate();
    return app;
}

AppModel load_app_file(const std::string& path)
{
    const std::string text = read_text_file(path);
    try {
        return load_app(text);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

std::string serialize_app(const AppModel& app)
{
    return to_json(app).dump(2) + "\n";
}

}  // namespace hybridex
