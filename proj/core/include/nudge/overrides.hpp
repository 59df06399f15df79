#pragma once

#include <filesystem>

#include <json.hpp>

#include "nudge/fsa_scoring.hpp"
#include "nudge/portion.hpp"
#include "nudge/who_scoring.hpp"

namespace nudge {

/// Every threshold table the scorers and the portion model read.
struct EngineConfig {
  WhoGoals who = default_who_goals();
  FsaConfig fsa = default_fsa_config();
  CalorieShareTable shares = default_share_table();
};

/// Applies a partial override document on top of `config`:
///
///   {"who": {"total_fat": [15, 30], "sugar_below_pct": 10, "salt_below_g_per_day": 5, ...},
///    "fsa": {"bounds": {"salt": [0.3, 1.5, 2.25]},
///            "epochs": [{"min": 4, "max": 7, "color": "green"}, ...],
///            "fibre_threshold": 3.0},
///    "share_table": [{"meals_per_day": 3, "food_type": "meal", "percent": 30}]}
///
/// Unknown keys and inconsistent tables throw ConfigError.
void apply_overrides(const nlohmann::json& doc, EngineConfig& config);
EngineConfig load_overrides(const std::filesystem::path& path, EngineConfig base = {});

nlohmann::json to_json(const EngineConfig& config);

}  // namespace nudge
