#include "nudge/who_scoring.hpp"

#include <algorithm>

namespace nudge {

namespace {

bool within(double value, PercentRange r) { return value >= r.min_pct && value <= r.max_pct; }

}  // namespace

int WhoBins::popcount() const {
  return static_cast<int>(std::count(bits.begin(), bits.end(), true));
}

const WhoGoals& default_who_goals() {
  static const WhoGoals goals{};
  return goals;
}

double prorate_daily_goal(double daily_amount, double portion_kcal, const WhoGoals& goals) {
  return daily_amount * (portion_kcal / goals.reference_day_kcal);
}

WhoBins who_bins(const Recipe& recipe, const WhoGoals& goals) {
  // Shares are basis-independent; the per-100 g profile is used for clarity.
  const MacroEnergyShares s = energy_shares(per_100g(recipe));
  const NutrientProfile& portion = recipe.per_portion;
  const double kcal = recipe.calories_per_portion;

  WhoBins bins;
  bins[WhoNutrient::Protein] = within(s.protein_pct, goals.protein);
  bins[WhoNutrient::Carbohydrate] = within(s.carbohydrate_pct, goals.carbohydrate);
  bins[WhoNutrient::Sugar] = s.sugar_pct < goals.sugar_below_pct;
  bins[WhoNutrient::TotalFat] = within(s.total_fat_pct, goals.total_fat);
  bins[WhoNutrient::SaturatedFat] = s.saturated_fat_pct < goals.saturated_fat_below_pct;
  bins[WhoNutrient::Sodium] = salt_g_from_sodium_mg(portion.sodium_mg) <
                              prorate_daily_goal(goals.salt_below_g_per_day, kcal, goals);
  bins[WhoNutrient::Cholesterol] =
      portion.cholesterol_mg < prorate_daily_goal(goals.cholesterol_below_mg_per_day, kcal, goals);
  bins[WhoNutrient::Fiber] = portion.fiber_g > prorate_daily_goal(goals.fiber_above_g_per_day, kcal, goals);
  return bins;
}

int who_health_score(const Recipe& recipe, const WhoGoals& goals) {
  return who_bins(recipe, goals).popcount();
}

}  // namespace nudge
