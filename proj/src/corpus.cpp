#include "hybridex/corpus.hpp"

#include "hybridex/errors.hpp"
#include "hybridex/io.hpp"
#include "hybridex/rng.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <set>

namespace hybridex {

namespace {

constexpr std::array<std::string_view, 24> kShallowPool{
    "Landroid/content/Context;->getResources",
    "Landroid/content/Context;->getAssets",
    "Landroid/content/res/AssetManager;->open",
    "Landroid/content/pm/PackageManager;->checkPermission",
    "Landroid/content/pm/ApplicationInfo;->getApplicationInfo",
    "Landroid/net/Uri;->parse",
    "Ljava/io/File;->exists",
    "Ljava/io/File;->mkdir",
    "Ljava/lang/Class;->getName",
    "Ljava/util/TimerTask;-><init>",
    "Ljava/util/Timer;->schedule",
    "Landroid/widget/Toast;->makeText",
    "Landroid/app/Activity;->startActivity",
    "Landroid/content/SharedPreferences;->edit",
    "Landroid/content/SharedPreferences$Editor;->commit",
    "Landroid/os/Handler;->postDelayed",
    "Landroid/view/View;->setVisibility",
    "Landroid/media/AudioManager;->getStreamVolume",
    "Landroid/os/Process;->myPid",
    "Ljava/lang/String;->getBytes",
    "Landroid/util/Base64;->decode",
    "Ljava/lang/StringBuilder;->append",
    "Landroid/content/Intent;->putExtra",
    "Landroid/app/NotificationManager;->notify",
};

constexpr std::array<std::string_view, 18> kDeepPool{
    "Ljava/security/MessageDigest;->getInstance",
    "Ljava/security/MessageDigest;->digest",
    "Ljava/security/MessageDigest;->update",
    "Ljava/util/zip/ZipInputStream;->read",
    "Ljava/lang/reflect/Method;->getClass",
    "Ljava/lang/reflect/Method;->getMethod",
    "Ljava/lang/reflect/Method;->invoke",
    "Ljava/io/FileOutputStream;->write",
    "Ljava/io/FileInputStream;->read",
    "Ldalvik/system/DexClassLoader;->loadClass",
    "Ljavax/crypto/Cipher;->getInstance",
    "Ljavax/crypto/Cipher;->doFinal",
    "Landroid/database/sqlite/SQLiteDatabase;->query",
    "Landroid/database/sqlite/SQLiteDatabase;->insert",
    "Landroid/content/ContentResolver;->query",
    "Ljava/lang/Runtime;->exec",
    "Landroid/content/pm/PackageManager;->getInstalledPackages",
    "Landroid/app/ActivityManager;->getRunningTasks",
};

constexpr std::array<std::string_view, 14> kBroadcastPool{
    "Landroid/telephony/TelephonyManager;->getDeviceId",
    "Landroid/telephony/TelephonyManager;->getSubscriberId",
    "Landroid/telephony/TelephonyManager;->getLine1Number",
    "Landroid/telephony/TelephonyManager;->getSimOperator",
    "Landroid/telephony/TelephonyManager;->getNetworkOperator",
    "Landroid/telephony/SmsManager;->sendTextMessage",
    "Landroid/telephony/SmsMessage;->createFromPdu",
    "Landroid/telephony/SmsMessage;->getOriginatingAddress",
    "Landroid/content/BroadcastReceiver;->abortBroadcast",
    "Landroid/app/AlarmManager;->set",
    "Landroid/app/Service;->startForeground",
    "Landroid/content/Context;->startService",
    "Landroid/os/PowerManager$WakeLock;->acquire",
    "Landroid/location/LocationManager;->getLastKnownLocation",
};

constexpr std::array<std::string_view, 16> kConfigPool{
    "Lorg/apache/http/client/HttpClient;->execute",
    "Ljava/net/URL;->openConnection",
    "Ljava/net/HttpURLConnection;->connect",
    "Ljava/net/HttpURLConnection;->getInputStream",
    "Ljava/net/Socket;-><init>",
    "Landroid/net/ConnectivityManager;->getActiveNetworkInfo",
    "Landroid/net/NetworkInfo;->getExtraInfo",
    "Landroid/net/wifi/WifiManager;->getConnectionInfo",
    "Landroid/net/wifi/WifiInfo;->getMacAddress",
    "Landroid/webkit/WebView;->loadUrl",
    "Landroid/provider/CallLog$Calls;->getLastOutgoingCall",
    "Landroid/provider/Telephony$Sms;->getDefaultSmsPackage",
    "Landroid/content/ContentResolver;->delete",
    "Ljava/util/GregorianCalendar;->getTime",
    "Ljava/util/Date;-><init>",
    "Ljava/util/List",
};

constexpr std::array<std::string_view, 8> kTrappedPool{
    "Landroid/accounts/AccountManager;->getAccounts",
    "Landroid/webkit/CookieManager;->getCookie",
    "Landroid/view/inputmethod/InputMethodManager;->showSoftInput",
    "Landroid/widget/EditText;->getText",
    "Landroid/app/KeyguardManager;->inKeyguardRestrictedInputMode",
    "Landroid/hardware/Camera;->open",
    "Landroid/media/MediaRecorder;->start",
    "Ljava/util/Date;->getTime",
};

constexpr std::array<std::string_view, 14> kBroadcastActions{
    "android.intent.action.BATTERY_CHANGED",
    "android.intent.action.BATTERY_LOW",
    "android.intent.action.BOOT_COMPLETED",
    "android.intent.action.MEDIA_MOUNTED",
    "android.intent.action.NEW_OUTGOING_CALL",
    "android.intent.action.PACKAGE_ADDED",
    "android.intent.action.PACKAGE_REMOVED",
    "android.intent.action.PHONE_STATE",
    "android.intent.action.SCREEN_ON",
    "android.intent.action.TIMEZONE_CHANGED",
    "android.intent.action.TIME_SET",
    "android.intent.action.USER_PRESENT",
    "android.net.conn.CONNECTIVITY_CHANGE",
    "android.provider.Telephony.SMS_RECEIVED",
};

constexpr int kContentTop = 64;
constexpr double kTrapShare = 0.5;
constexpr double kPoolAffinity = 0.85;

struct PlannedScreen {
    int parent = -1;
    int depth = 0;
    bool modal = false;
    bool trap = false;
    bool behind_trap = false;
    std::vector<int> children;
};

struct PendingWidget {
    WidgetKind kind = WidgetKind::button;
    std::set<GestureKind> gestures{GestureKind::touch};
    int width = 0;
    int height = 0;
};

PendingWidget make_widget(Rng& rng, WidgetKind kind)
{
    PendingWidget w;
    w.kind = kind;
    switch (kind) {
    case WidgetKind::button:
        w.width = static_cast<int>(rng.between(360, 900));
        w.height = static_cast<int>(rng.between(110, 180));
        break;
    case WidgetKind::list_item:
        w.width = static_cast<int>(rng.between(960, 1080));
        w.height = static_cast<int>(rng.between(90, 140));
        if (rng.chance(0.5)) {
            w.gestures.insert(GestureKind::swipe);
        }
        break;
    case WidgetKind::menu_item:
        w.width = static_cast<int>(rng.between(240, 480));
        w.height = static_cast<int>(rng.between(80, 110));
        break;
    case WidgetKind::text_field:
        w.width = static_cast<int>(rng.between(700, 1000));
        w.height = static_cast<int>(rng.between(100, 150));
        break;
    case WidgetKind::dismiss_control:
        w.width = static_cast<int>(rng.between(120, 220));
        w.height = static_cast<int>(rng.between(100, 140));
        break;
    }
    return w;
}

WidgetKind random_interactive_kind(Rng& rng)
{
    constexpr std::array kinds{WidgetKind::button, WidgetKind::list_item, WidgetKind::menu_item,
                               WidgetKind::text_field};
    return kinds[rng.below(kinds.size())];
}

/// Stacks widgets top to bottom, one per horizontal slot, so bounds never
/// overlap and never enter the status-bar strip.
std::vector<Widget> lay_out(const std::vector<PendingWidget>& pending, Rng& rng)
{
    std::vector<Widget> out;
    if (pending.empty()) {
        return out;
    }
    const int slot = (kScreenHeight - kContentTop) / static_cast<int>(pending.size());
    for (std::size_t i = 0; i < pending.size(); ++i) {
        const PendingWidget& p = pending[i];
        const int height = std::min(p.height, slot - 4);
        const int width = std::min(p.width, kScreenWidth);
        const int slot_top = kContentTop + static_cast<int>(i) * slot;
        const int top = slot_top + static_cast<int>(rng.between(0, slot - height));
        const int left = static_cast<int>(rng.between(0, kScreenWidth - width));
        Widget w;
        w.id = "w" + std::to_string(i);
        w.kind = p.kind;
        w.bounds = {left, top, left + width, top + height};
        w.accepted_gestures = p.gestures;
        out.push_back(std::move(w));
    }
    return out;
}

class AppBuilder {
public:
    AppBuilder(const CorpusConfig& config, std::size_t index)
        : config_(config), rng_(mix_seed(config.seed, index))
    {
        char id[64];
        std::snprintf(id, sizeof id, "%s.app%04zu", config.tag.c_str(), index);
        app_.manifest.package_id = id;
        app_.manifest.permissions.insert("android.permission.INTERNET");
    }

    AppModel build()
    {
        plan_screens();
        plan_behaviors();
        materialize();
        return std::move(app_);
    }

private:
    struct PlannedBehavior {
        int screen = 0;
        bool broadcast = false;
        std::string action;
        std::optional<Guard> guard;
        ApiSignature signature;
        // Index into the screen's pending widget list for gesture behaviors.
        int widget = -1;
        GestureKind gesture = GestureKind::touch;
    };

    void plan_screens()
    {
        const int n = static_cast<int>(
            rng_.between(config_.screens_per_app.min, config_.screens_per_app.max));
        screens_.resize(static_cast<std::size_t>(n));
        for (int i = 1; i < n; ++i) {
            std::vector<int> eligible;
            for (int j = 0; j < i; ++j) {
                if (!(screens_[j].trap && !screens_[j].children.empty())) {
                    eligible.push_back(j);
                }
            }
            int parent = eligible[rng_.below(eligible.size())];
            if (rng_.chance(0.5) && std::find(eligible.begin(), eligible.end(), i - 1) != eligible.end()) {
                parent = i - 1;
            }
            PlannedScreen& s = screens_[static_cast<std::size_t>(i)];
            s.parent = parent;
            s.depth = screens_[static_cast<std::size_t>(parent)].depth + 1;
            s.behind_trap = screens_[static_cast<std::size_t>(parent)].trap
                            || screens_[static_cast<std::size_t>(parent)].behind_trap;
            s.modal = rng_.chance(config_.modal_fraction);
            s.trap = s.modal && rng_.chance(kTrapShare);
            screens_[static_cast<std::size_t>(parent)].children.push_back(i);
        }

        pending_.resize(screens_.size());
        for (std::size_t i = 0; i < screens_.size(); ++i) {
            const PlannedScreen& s = screens_[i];
            if (s.trap) {
                // Login wall: a credentials field and a submit button that
                // does nothing without input the explorers cannot supply.
                pending_[i].push_back(make_widget(rng_, WidgetKind::text_field));
                pending_[i].push_back(make_widget(rng_, WidgetKind::button));
                continue;
            }
            for (int child : s.children) {
                nav_widget_[{static_cast<int>(i), child}] = static_cast<int>(pending_[i].size());
                constexpr std::array nav_kinds{WidgetKind::button, WidgetKind::list_item,
                                               WidgetKind::menu_item};
                pending_[i].push_back(make_widget(rng_, nav_kinds[rng_.below(nav_kinds.size())]));
            }
            if (s.modal) {
                dismiss_widget_[static_cast<int>(i)] = static_cast<int>(pending_[i].size());
                pending_[i].push_back(make_widget(rng_, WidgetKind::dismiss_control));
            }
        }
    }

    void plan_behaviors()
    {
        const int count = static_cast<int>(
            rng_.between(config_.behaviors_per_app.min, config_.behaviors_per_app.max));
        for (int k = 0; k < count; ++k) {
            PlannedBehavior b;
            b.broadcast = rng_.chance(config_.broadcast_fraction);
            const bool guarded = rng_.chance(config_.guarded_fraction);
            b.screen = static_cast<int>(rng_.below(screens_.size()));
            if (b.broadcast && rng_.chance(0.5)) {
                b.screen = 0;
            }
            if (guarded) {
                b.guard = make_guard(b.screen);
            }
            BehaviorClass cls = BehaviorClass::shallow;
            const PlannedScreen& s = screens_[static_cast<std::size_t>(b.screen)];
            if (b.broadcast) {
                cls = BehaviorClass::broadcast;
                b.action = unused_action_on(b.screen);
                add_action(b.action);
            } else {
                if (guarded) {
                    cls = BehaviorClass::config;
                } else if (s.behind_trap) {
                    cls = BehaviorClass::trapped;
                } else if (s.depth >= 2 || s.trap) {
                    cls = BehaviorClass::deep;
                }
                auto& list = pending_[static_cast<std::size_t>(b.screen)];
                PendingWidget w = make_widget(rng_, random_interactive_kind(rng_));
                b.gesture = w.gestures.contains(GestureKind::swipe) && rng_.chance(0.5)
                                ? GestureKind::swipe
                                : GestureKind::touch;
                b.widget = static_cast<int>(list.size());
                list.push_back(std::move(w));
            }
            b.signature = pick_signature(cls);
            behaviors_.push_back(std::move(b));
        }
    }

    Guard make_guard(int screen)
    {
        enum AtomKind { wifi, airplane, sms, call_log, broadcast, visited };
        std::vector<int> visit_targets;
        for (std::size_t i = 1; i < screens_.size(); ++i) {
            if (static_cast<int>(i) != screen && !screens_[i].behind_trap) {
                visit_targets.push_back(static_cast<int>(i));
            }
        }

        Guard g;
        const std::size_t atoms = rng_.chance(0.2) ? 2 : 1;
        std::set<AtomKind> used;
        while (g.atoms.size() < atoms) {
            const double r = rng_.unit();
            AtomKind kind = r < 0.3    ? wifi
                            : r < 0.5  ? airplane
                            : r < 0.6  ? sms
                            : r < 0.7  ? call_log
                            : r < 0.85 ? broadcast
                                       : visited;
            if (kind == visited && visit_targets.empty()) {
                kind = wifi;
            }
            if (!used.insert(kind).second) {
                continue;
            }
            switch (kind) {
            case wifi:
                g.atoms.emplace_back(atom::WifiOn{});
                app_.manifest.permissions.insert("android.permission.ACCESS_WIFI_STATE");
                break;
            case airplane: g.atoms.emplace_back(atom::AirplaneOff{}); break;
            case sms:
                g.atoms.emplace_back(atom::EnvData{EnvSource::sms});
                app_.manifest.permissions.insert("android.permission.READ_SMS");
                break;
            case call_log:
                g.atoms.emplace_back(atom::EnvData{EnvSource::call_log});
                app_.manifest.permissions.insert("android.permission.READ_CALL_LOG");
                break;
            case broadcast: {
                auto pool = broadcast_action_pool();
                std::string action(pool[rng_.below(pool.size())]);
                add_action(action);
                g.atoms.emplace_back(atom::BroadcastReceived{action});
                break;
            }
            case visited: {
                const int target = visit_targets[rng_.below(visit_targets.size())];
                g.atoms.emplace_back(atom::VisitedScreen{"s" + std::to_string(target)});
                break;
            }
            }
        }
        return g;
    }

    std::string unused_action_on(int screen)
    {
        auto pool = broadcast_action_pool();
        std::vector<std::string_view> free;
        for (auto a : pool) {
            if (!used_actions_[screen].contains(std::string(a))) {
                free.push_back(a);
            }
        }
        std::string action(free[rng_.below(free.size())]);
        used_actions_[screen].insert(action);
        return action;
    }

    void add_action(const std::string& action)
    {
        app_.manifest.broadcast_actions.insert(action);
        if (action == "android.intent.action.BOOT_COMPLETED") {
            app_.manifest.permissions.insert("android.permission.RECEIVE_BOOT_COMPLETED");
        } else if (action == "android.provider.Telephony.SMS_RECEIVED") {
            app_.manifest.permissions.insert("android.permission.RECEIVE_SMS");
        } else if (action == "android.intent.action.PHONE_STATE") {
            app_.manifest.permissions.insert("android.permission.READ_PHONE_STATE");
        }
    }

    ApiSignature pick_signature(BehaviorClass cls)
    {
        auto from_pool = [this](std::span<const std::string_view> pool) -> std::optional<ApiSignature> {
            std::vector<std::string_view> free;
            for (auto s : pool) {
                if (!used_signatures_.contains(ApiSignature(std::string(s)))) {
                    free.push_back(s);
                }
            }
            if (free.empty()) {
                return std::nullopt;
            }
            return ApiSignature(std::string(free[rng_.below(free.size())]));
        };
        constexpr std::array all{BehaviorClass::shallow, BehaviorClass::deep, BehaviorClass::broadcast,
                                 BehaviorClass::config, BehaviorClass::trapped};
        std::optional<ApiSignature> sig;
        if (rng_.chance(kPoolAffinity)) {
            sig = from_pool(signature_pool(cls));
        }
        if (!sig) {
            sig = from_pool(signature_pool(all[rng_.below(all.size())]));
        }
        for (std::size_t i = 0; !sig && i < all.size(); ++i) {
            sig = from_pool(signature_pool(all[i]));
        }
        if (!sig) {
            throw ValidationError("corpus: behaviors_per_app exceeds the signature pool");
        }
        used_signatures_.insert(*sig);
        return *sig;
    }

    void materialize()
    {
        // An empty hierarchy is indistinguishable from any other empty one.
        for (auto& list : pending_) {
            if (list.empty()) {
                list.push_back(make_widget(rng_, WidgetKind::text_field));
            }
        }
        // Document order is shuffled so navigation and behavior widgets
        // interleave; remember where each pending widget ends up.
        std::vector<std::vector<int>> position(screens_.size());
        std::set<std::string> layouts;
        for (std::size_t i = 0; i < screens_.size(); ++i) {
            auto& list = pending_[i];
            std::vector<int> order(list.size());
            for (std::size_t k = 0; k < order.size(); ++k) {
                order[k] = static_cast<int>(k);
            }
            for (std::size_t k = order.size(); k > 1; --k) {
                std::swap(order[k - 1], order[rng_.below(k)]);
            }
            std::vector<PendingWidget> shuffled;
            position[i].assign(list.size(), 0);
            for (std::size_t k = 0; k < order.size(); ++k) {
                shuffled.push_back(list[static_cast<std::size_t>(order[k])]);
                position[i][static_cast<std::size_t>(order[k])] = static_cast<int>(k);
            }

            Screen screen;
            screen.id = "s" + std::to_string(i);
            screen.is_entry = i == 0;
            screen.modal = screens_[i].modal;
            screen.trap = screens_[i].trap;
            if (screen.trap) {
                screen.note = "login wall without a dismiss-control; ENTER returns to the parent"
                              " screen and DPAD_CENTER opens the next one";
            }
            // Identical hierarchies would alias in a UI-state digest.
            std::string layout_key;
            do {
                screen.widgets = lay_out(shuffled, rng_);
                layout_key = std::to_string(screen.modal) + ":";
                for (const auto& w : screen.widgets) {
                    layout_key += std::string(to_string(w.kind)) + std::to_string(w.bounds.left) + ","
                                  + std::to_string(w.bounds.top) + ";";
                }
            } while (!layouts.insert(layout_key).second);
            app_.screens.push_back(std::move(screen));
        }

        auto widget_id = [&](int screen, int pending_index) {
            return "w" + std::to_string(position[static_cast<std::size_t>(screen)]
                                                [static_cast<std::size_t>(pending_index)]);
        };
        auto sid = [](int i) { return "s" + std::to_string(i); };

        for (std::size_t i = 0; i < screens_.size(); ++i) {
            const int si = static_cast<int>(i);
            const PlannedScreen& s = screens_[i];
            for (int child : s.children) {
                Transition t;
                t.from_screen = sid(si);
                t.to_screen = sid(child);
                if (s.trap) {
                    t.trigger = trigger::Key{kKeyDpadCenter};
                } else {
                    t.trigger = trigger::Gesture{widget_id(si, nav_widget_.at({si, child})),
                                                 GestureKind::touch};
                }
                app_.transitions.push_back(std::move(t));
            }
            if (s.parent >= 0) {
                Transition back;
                back.from_screen = sid(si);
                back.to_screen = sid(s.parent);
                if (s.trap) {
                    back.trigger = trigger::Key{kKeyEnter};
                } else if (s.modal) {
                    back.trigger =
                        trigger::Gesture{widget_id(si, dismiss_widget_.at(si)), GestureKind::touch};
                } else {
                    back.trigger = trigger::Key{kKeyBack};
                }
                app_.transitions.push_back(std::move(back));
            }
        }

        for (const auto& b : behaviors_) {
            Transition t;
            t.from_screen = sid(b.screen);
            t.to_screen = sid(b.screen);
            if (b.broadcast) {
                t.trigger = trigger::Broadcast{b.action};
            } else {
                t.trigger = trigger::Gesture{widget_id(b.screen, b.widget), b.gesture};
            }
            t.guard = b.guard;
            t.emits.push_back(b.signature);
            app_.transitions.push_back(std::move(t));
        }
    }

    const CorpusConfig& config_;
    Rng rng_;
    AppModel app_;
    std::vector<PlannedScreen> screens_;
    std::vector<std::vector<PendingWidget>> pending_;
    std::map<std::pair<int, int>, int> nav_widget_;
    std::map<int, int> dismiss_widget_;
    std::map<int, std::set<std::string>> used_actions_;
    std::set<ApiSignature> used_signatures_;
    std::vector<PlannedBehavior> behaviors_;
};

}  // namespace

std::span<const std::string_view> signature_pool(BehaviorClass cls)
{
    switch (cls) {
    case BehaviorClass::shallow: return kShallowPool;
    case BehaviorClass::deep: return kDeepPool;
    case BehaviorClass::broadcast: return kBroadcastPool;
    case BehaviorClass::config: return kConfigPool;
    case BehaviorClass::trapped: return kTrappedPool;
    }
    return {};
}

std::span<const std::string_view> broadcast_action_pool()
{
    return kBroadcastActions;
}

void CorpusConfig::validate() const
{
    auto fraction = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ValidationError(std::string("corpus config: ") + name + " must be in [0, 1]");
        }
    };
    fraction(guarded_fraction, "guarded_fraction");
    fraction(modal_fraction, "modal_fraction");
    fraction(broadcast_fraction, "broadcast_fraction");
    if (screens_per_app.min < 1 || screens_per_app.max < screens_per_app.min) {
        throw ValidationError("corpus config: screens_per_app must be a non-empty positive range");
    }
    if (behaviors_per_app.min < 1 || behaviors_per_app.max < behaviors_per_app.min) {
        throw ValidationError("corpus config: behaviors_per_app must be a non-empty positive range");
    }
    std::size_t pool = 0;
    for (auto cls : {BehaviorClass::shallow, BehaviorClass::deep, BehaviorClass::broadcast,
                     BehaviorClass::config, BehaviorClass::trapped}) {
        pool += signature_pool(cls).size();
    }
    if (static_cast<std::size_t>(behaviors_per_app.max) > pool) {
        throw ValidationError("corpus config: behaviors_per_app exceeds the signature pool ("
                              + std::to_string(pool) + ")");
    }
    if (tag.empty()) {
        throw ValidationError("corpus config: tag must not be empty");
    }
}

AppModel generate_app(const CorpusConfig& config, std::size_t index)
{
    AppModel app = AppBuilder(config, index).build();
    app.validate();
    return app;
}

std::vector<AppModel> generate_corpus(const CorpusConfig& config)
{
    config.validate();
    std::vector<AppModel> corpus;
    corpus.reserve(config.app_count);
    for (std::size_t i = 0; i < config.app_count; ++i) {
        corpus.push_back(generate_app(config, i));
    }
    return corpus;
}

nlohmann::json to_json(const CorpusConfig& config)
{
    return {{"app_count", config.app_count},
            {"screens_per_app", {config.screens_per_app.min, config.screens_per_app.max}},
            {"behaviors_per_app", {config.behaviors_per_app.min, config.behaviors_per_app.max}},
            {"guarded_fraction", config.guarded_fraction},
            {"modal_fraction", config.modal_fraction},
            {"broadcast_fraction", config.broadcast_fraction},
            {"seed", config.seed},
            {"tag", config.tag}};
}

void save_corpus(const std::filesystem::path& dir, const CorpusConfig& config,
                 const std::vector<AppModel>& apps)
{
    write_text_file(dir / "corpus.json", to_json(config).dump(2) + "\n");
    for (const auto& app : apps) {
        write_text_file(dir / (app.id() + ".app.json"), serialize_app(app));
    }
}

std::vector<AppModel> load_corpus(const std::filesystem::path& dir)
{
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        throw IoError("corpus directory '" + dir.string() + "' does not exist");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().filename().string().ends_with(".app.json")) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<AppModel> apps;
    std::set<std::string> ids;
    for (const auto& f : files) {
        apps.push_back(load_app_file(f.string()));
        if (!ids.insert(apps.back().id()).second) {
            throw ValidationError("corpus: duplicate package id '" + apps.back().id() + "'");
        }
    }
    return apps;
}

}  // namespace hybridex
