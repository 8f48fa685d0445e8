#pragma once

#include "hybridex/app_model.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hybridex {

struct IntRange {
    int min = 1;
    int max = 1;

    friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct CorpusConfig {
    std::size_t app_count = 10;
    IntRange screens_per_app{4, 9};
    IntRange behaviors_per_app{6, 14};
    /// Share of behaviors carrying a guard.
    double guarded_fraction = 0.3;
    /// Share of non-entry screens that are modal; half of those are traps.
    double modal_fraction = 0.1;
    /// Share of behaviors triggered by a broadcast instead of a gesture.
    double broadcast_fraction = 0.2;
    std::uint64_t seed = 0;
    /// Package-id prefix, e.g. "benign" or "malware".
    std::string tag = "app";

    void validate() const;

    friend bool operator==(const CorpusConfig&, const CorpusConfig&) = default;
};

/// Where a generated behavior was planted. Drives signature selection so
/// that classes map onto recognisable API families.
enum class BehaviorClass {
    shallow,    ///< unguarded gesture within one hop of the entry screen
    deep,       ///< unguarded gesture two or more hops deep
    broadcast,  ///< fired by a manifest broadcast
    config,     ///< carries a guard
    trapped,    ///< behind a modal trap; only key input gets there
};

std::span<const std::string_view> signature_pool(BehaviorClass cls);
std::span<const std::string_view> broadcast_action_pool();

/// Deterministic corpus. App i depends only on (config, i).
std::vector<AppModel> generate_corpus(const CorpusConfig& config);
AppModel generate_app(const CorpusConfig& config, std::size_t index);

/// Corpus directory layout: corpus.json (the generating config) and one
/// <package id>.app.json per app. Overwrites existing files; throws IoError.
void save_corpus(const std::filesystem::path& dir, const CorpusConfig& config,
                 const std::vector<AppModel>& apps);

/// Loads every *.app.json in file-name order. Throws IoError, ParseError
/// or ValidationError (duplicate package ids included).
std::vector<AppModel> load_corpus(const std::filesystem::path& dir);

nlohmann::json to_json(const CorpusConfig& config);

/// Key that takes a trap screen to its child.
inline constexpr int kKeyDpadCenter = 23;
/// Key that leaves a trap screen towards its parent.
inline constexpr int kKeyEnter = 66;

}  // namespace hybridex
