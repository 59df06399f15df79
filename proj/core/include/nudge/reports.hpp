#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "nudge/food_type.hpp"
#include "nudge/health_profile.hpp"
#include "nudge/overrides.hpp"

namespace nudge {

struct ScoreBucket {
  int score = 0;
  std::size_t count = 0;
  double percent = 0.0;
};

struct ScoreDistribution {
  std::size_t total = 0;
  std::vector<ScoreBucket> who;  // scores 0..8
  std::vector<ScoreBucket> fsa;  // scores 4..16
  // Recipes whose scores could not be computed (zero energy).
  std::size_t unscored = 0;
};

ScoreDistribution score_distribution(const std::vector<Recipe>& recipes, const EngineConfig& config = {});

nlohmann::json to_json(const ScoreDistribution& d);
std::string format_distribution(const ScoreDistribution& d);

struct TargetRow {
  FoodType food_type = FoodType::Meal;
  double percent = 0.0;
  double target_kcal = 0.0;
};

std::vector<TargetRow> target_table(const HealthProfile& profile, int meals_per_day,
                                    const CalorieShareTable& shares = default_share_table());

std::string format_profile(const UserHealthInput& input, const HealthProfile& profile,
                           const std::vector<TargetRow>& targets);

}  // namespace nudge
