#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>

#include "nudge/corpus.hpp"
#include "nudge/food_type.hpp"
#include "nudge/health_profile.hpp"

namespace nudge {

/// Percent of DRCI allotted to one food type, keyed by meals-per-day.
/// Range-valued guidance is stored at its midpoint.
class CalorieShareTable {
 public:
  CalorieShareTable() = default;

  void set(int meals_per_day, FoodType type, double percent);
  /// Throws ConfigError when the cell is absent.
  double percent(int meals_per_day, FoodType type) const;
  bool contains(int meals_per_day, FoodType type) const;
  const std::map<std::pair<int, FoodType>, double>& cells() const { return cells_; }

 private:
  std::map<std::pair<int, FoodType>, double> cells_;
};

const CalorieShareTable& default_share_table();

/// Rows "meals_per_day,food_type,percent" applied on top of `base`.
CalorieShareTable load_share_overrides(const std::filesystem::path& path,
                                       CalorieShareTable base = default_share_table());
CalorieShareTable parse_share_overrides(std::istream& in, CalorieShareTable base = default_share_table());

struct PortionRecommendation {
  std::string recipe_id;
  double target_kcal = 0.0;
  double calories_per_portion = 0.0;
  double portions = 0.0;
  bool fits = false;
  std::string explanation;
};

double target_calories(const HealthProfile& profile, FoodType type, int meals_per_day,
                       const CalorieShareTable& table = default_share_table());

/// Throws ScoringError when the recipe has no calories.
PortionRecommendation portion_size(double target_kcal, const Recipe& recipe, FoodType type);

std::string explain_portion(const PortionRecommendation& rec, FoodType type);

/// Portion count as shown to users (two decimals).
std::string format_portions(double portions);

}  // namespace nudge
