#include "hybridex/app_model.hpp"
#include "hybridex/corpus.hpp"
#include "hybridex/errors.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

namespace hybridex {
namespace {

using namespace hybridex::testing;

template <typename Error>
std::string error_of(const json& doc)
{
    try {
        load_app(doc.dump());
    } catch (const Error& e) {
        return e.what();
    }
    return "<no error>";
}

TEST(LoadApp, MinimalDocument)
{
    const AppModel app = app_of(minimal_document());
    EXPECT_EQ(app.screens.size(), 1u);
    EXPECT_EQ(app.transitions.size(), 1u);
    EXPECT_EQ(app.entry_screen().id, "s0");
    EXPECT_EQ(app.all_signatures(), SignatureSet{ApiSignature("Lx;->y")});
}

TEST(LoadApp, DanglingScreenReferenceIsNamed)
{
    json doc = minimal_document();
    doc["transitions"][0]["to_screen"] = "s9";
    const std::string msg = error_of<ValidationError>(doc);
    EXPECT_NE(msg.find("dangling"), std::string::npos) << msg;
    EXPECT_NE(msg.find("s9"), std::string::npos) << msg;
}

TEST(LoadApp, DuplicateTrigger)
{
    json doc = minimal_document();
    doc["transitions"].push_back(transition("s0", gesture("w1"), "s0", {"La;->b"}));
    EXPECT_NE(error_of<ValidationError>(doc).find("duplicate trigger"), std::string::npos);
}

TEST(LoadApp, MalformedTextIsParseError)
{
    EXPECT_THROW(load_app("{\"manifest\": "), ParseError);
    EXPECT_THROW(load_app("[]"), ParseError);
    json doc = minimal_document();
    doc["screens"][0]["widgets"][0]["bounds"] = {1, 2, 3};
    EXPECT_THROW(load_app(doc.dump()), ParseError);
    doc = minimal_document();
    doc["transitions"][0]["guard"] = json::array({{{"atom", "battery_low"}}});
    EXPECT_THROW(load_app(doc.dump()), ParseError);
}

TEST(LoadApp, WidgetGeometryInvariants)
{
    json doc = minimal_document();
    doc["screens"][0]["widgets"].push_back(widget("w2", {400, 250, 700, 400}));
    EXPECT_NE(error_of<ValidationError>(doc).find("overlap"), std::string::npos);

    doc = minimal_document();
    doc["screens"][0]["widgets"].push_back(widget("w2", {900, 1800, 1100, 1900}));
    EXPECT_NE(error_of<ValidationError>(doc).find("outside the screen"), std::string::npos);

    // Touching edges do not overlap: bounds are half-open.
    doc = minimal_document();
    doc["screens"][0]["widgets"].push_back(widget("w2", {500, 200, 700, 300}));
    EXPECT_NO_THROW(load_app(doc.dump()));
}

TEST(LoadApp, ExactlyOneEntry)
{
    json doc = minimal_document();
    doc["screens"][0]["is_entry"] = false;
    EXPECT_NE(error_of<ValidationError>(doc).find("exactly one entry"), std::string::npos);
}

TEST(LoadApp, ModalNeedsDismissOrTrap)
{
    json doc = minimal_document();
    doc["screens"].push_back(screen("s1", json::array({widget("w1", {0, 100, 200, 200})}), false, true));
    doc["transitions"].push_back(transition("s0", key(82), "s1"));
    EXPECT_NE(error_of<ValidationError>(doc).find("not marked as a trap"), std::string::npos);

    doc["screens"][1]["trap"] = true;
    doc["screens"][1]["note"] = "login wall";
    EXPECT_NO_THROW(load_app(doc.dump()));

    doc["screens"][1]["trap"] = false;
    doc["screens"][1]["widgets"].push_back(widget("w2", {0, 300, 200, 400}, {"touch"}, "dismiss-control"));
    EXPECT_NO_THROW(load_app(doc.dump()));
}

TEST(LoadApp, BroadcastMustBeInManifest)
{
    json doc = minimal_document();
    doc["transitions"].push_back(transition("s0", broadcast("android.intent.action.BOOT_COMPLETED"), "s0", {"La;->b"}));
    EXPECT_NE(error_of<ValidationError>(doc).find("not declared in manifest"), std::string::npos);
    doc["manifest"]["broadcast_actions"] = {"android.intent.action.BOOT_COMPLETED"};
    EXPECT_NO_THROW(load_app(doc.dump()));
}

TEST(LoadApp, GuardReferencesMustResolve)
{
    json doc = minimal_document();
    doc["transitions"][0]["guard"] = json::array({{{"atom", "visited_screen"}, {"screen", "s7"}}});
    EXPECT_NE(error_of<ValidationError>(doc).find("unknown screen"), std::string::npos);
}

TEST(LoadApp, GestureMustBeAccepted)
{
    json doc = minimal_document();
    doc["transitions"][0]["trigger"] = gesture("w1", "swipe");
    EXPECT_NE(error_of<ValidationError>(doc).find("does not accept"), std::string::npos);
}

TEST(LoadApp, ScreensMustConnectToEntry)
{
    json doc = minimal_document();
    doc["screens"].push_back(screen("s1", json::array({widget("w1", {0, 100, 200, 200})})));
    EXPECT_NE(error_of<ValidationError>(doc).find("disconnected from the entry"), std::string::npos);
}

TEST(LoadApp, SerializeRoundTripOverGeneratedApps)
{
    CorpusConfig cfg;
    cfg.app_count = 40;
    cfg.seed = 3;
    cfg.modal_fraction = 0.4;
    for (const auto& app : generate_corpus(cfg)) {
        const std::string text = serialize_app(app);
        const AppModel back = load_app(text);
        EXPECT_EQ(back, app) << app.id();
        EXPECT_EQ(serialize_app(back), text) << app.id();
    }
}

}  // namespace
}  // namespace hybridex
