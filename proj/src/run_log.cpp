#include "hybridex/run_log.hpp"

#include "hybridex/errors.hpp"

namespace hybridex {

using nlohmann::json;

std::string_view to_string(PhaseLabel label)
{
    return label == PhaseLabel::random ? "random" : "state";
}

std::string_view to_string(PhaseEnd end)
{
    switch (end) {
    case PhaseEnd::budget: return "budget";
    case PhaseEnd::disconnected: return "disconnected";
    case PhaseEnd::crashed: return "crashed";
    case PhaseEnd::stuck: return "stuck";
    case PhaseEnd::safety_cap: return "safety_cap";
    }
    return "?";
}

std::string_view to_string(ScenarioKind kind)
{
    switch (kind) {
    case ScenarioKind::random_only: return "random_only";
    case ScenarioKind::state_only: return "state_only";
    case ScenarioKind::hybrid: return "hybrid";
    }
    return "?";
}

ScenarioKind scenario_kind_from_string(std::string_view text)
{
    for (auto k : {ScenarioKind::random_only, ScenarioKind::state_only, ScenarioKind::hybrid}) {
        if (to_string(k) == text) {
            return k;
        }
    }
    throw ValidationError("unknown scenario kind '" + std::string(text) + "'");
}

namespace {

PhaseLabel phase_label_from_string(std::string_view text)
{
    if (text == "random") {
        return PhaseLabel::random;
    }
    if (text == "state") {
        return PhaseLabel::state;
    }
    throw ParseError("unknown phase label '" + std::string(text) + "'");
}

PhaseEnd phase_end_from_string(std::string_view text)
{
    for (auto e : {PhaseEnd::budget, PhaseEnd::disconnected, PhaseEnd::crashed, PhaseEnd::stuck,
                   PhaseEnd::safety_cap}) {
        if (to_string(e) == text) {
            return e;
        }
    }
    throw ParseError("unknown phase end '" + std::string(text) + "'");
}

json config_to_json(const DeviceConfig& c)
{
    return {{"wifi_on", c.wifi_on}, {"airplane_on", c.airplane_on}, {"adb_on", c.adb_on}};
}

DeviceConfig config_from_json(const json& j)
{
    return {j.at("wifi_on").get<bool>(), j.at("airplane_on").get<bool>(), j.at("adb_on").get<bool>()};
}

json optional_seed(const std::optional<std::uint64_t>& seed)
{
    return seed ? json(*seed) : json(nullptr);
}

}  // namespace

SignatureSet PhaseLog::distinct_signatures() const
{
    SignatureSet out;
    for (const auto& e : emissions) {
        out.insert(e.signature);
    }
    return out;
}

SignatureSet RunLog::distinct_signatures() const
{
    SignatureSet out;
    for (const auto& p : phases) {
        for (const auto& e : p.emissions) {
            out.insert(e.signature);
        }
    }
    return out;
}

std::uint64_t RunLog::events_delivered() const
{
    std::uint64_t total = 0;
    for (const auto& p : phases) {
        total += p.events_delivered;
    }
    return total;
}

const PhaseLog* RunLog::phase(PhaseLabel label) const
{
    for (const auto& p : phases) {
        if (p.label == label) {
            return &p;
        }
    }
    return nullptr;
}

json to_json(const RunLog& log)
{
    json phases = json::array();
    for (const auto& p : log.phases) {
        json emissions = json::array();
        for (const auto& e : p.emissions) {
            emissions.push_back({{"event_index", e.event_index}, {"signature", e.signature.text()}});
        }
        phases.push_back({{"label", to_string(p.label)},
                          {"events_delivered", p.events_delivered},
                          {"ended_by", to_string(p.ended_by)},
                          {"emissions", emissions}});
    }
    json snapshots = json::array();
    for (const auto& s : log.config_snapshots) {
        snapshots.push_back({{"checkpoint", s.checkpoint},
                             {"before", config_to_json(s.before)},
                             {"after", config_to_json(s.after)}});
    }
    json early = nullptr;
    if (log.early_termination) {
        early = {{"phase", to_string(log.early_termination->phase)},
                 {"reason", to_string(log.early_termination->reason)},
                 {"detail", log.early_termination->detail}};
    }
    return {{"app_id", log.app_id},
            {"scenario", to_string(log.scenario)},
            {"seeds", {{"random", optional_seed(log.seeds.random)}, {"state", optional_seed(log.seeds.state)}}},
            {"rng_algorithm", log.rng_algorithm},
            {"phases", phases},
            {"early_termination", early},
            {"config_snapshots", snapshots}};
}

RunLog runlog_from_json(const json& doc)
{
    try {
        RunLog log;
        log.app_id = doc.at("app_id").get<std::string>();
        log.scenario = scenario_kind_from_string(doc.at("scenario").get<std::string>());
        const json& seeds = doc.at("seeds");
        if (!seeds.at("random").is_null()) {
            log.seeds.random = seeds.at("random").get<std::uint64_t>();
        }
        if (!seeds.at("state").is_null()) {
            log.seeds.state = seeds.at("state").get<std::uint64_t>();
        }
        log.rng_algorithm = doc.at("rng_algorithm").get<std::string>();
        for (const auto& jp : doc.at("phases")) {
            PhaseLog p;
            p.label = phase_label_from_string(jp.at("label").get<std::string>());
            p.events_delivered = jp.at("events_delivered").get<std::uint64_t>();
            p.ended_by = phase_end_from_string(jp.at("ended_by").get<std::string>());
            for (const auto& je : jp.at("emissions")) {
                p.emissions.push_back({je.at("event_index").get<std::uint64_t>(),
                                       ApiSignature(je.at("signature").get<std::string>())});
            }
            log.phases.push_back(std::move(p));
        }
        const json& early = doc.at("early_termination");
        if (!early.is_null()) {
            log.early_termination =
                EarlyTermination{phase_label_from_string(early.at("phase").get<std::string>()),
                                 phase_end_from_string(early.at("reason").get<std::string>()),
                                 early.at("detail").get<std::string>()};
        }
        for (const auto& js : doc.at("config_snapshots")) {
            log.config_snapshots.push_back({js.at("checkpoint").get<std::string>(),
                                            config_from_json(js.at("before")),
                                            config_from_json(js.at("after"))});
        }
        return log;
    } catch (const json::exception& e) {
        throw ParseError(std::string("run log: ") + e.what());
    } catch (const ValidationError& e) {
        throw ParseError(std::string("run log: ") + e.what());
    }
}

std::string serialize_runlog(const RunLog& log)
{
    return to_json(log).dump(2) + "\n";
}

}  // namespace hybridex
