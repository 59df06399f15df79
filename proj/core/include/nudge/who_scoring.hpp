#pragma once

#include <array>
#include <cstddef>

#include "nudge/corpus.hpp"

namespace nudge {

/// Bin order is fixed and shared with every serialized form.
enum class WhoNutrient : std::size_t {
  Protein = 0,
  Carbohydrate,
  Sugar,
  Sodium,
  TotalFat,
  SaturatedFat,
  Fiber,
  Cholesterol,
};
inline constexpr std::size_t kWhoBinCount = 8;

struct WhoBins {
  std::array<bool, kWhoBinCount> bits{};

  bool operator[](WhoNutrient n) const { return bits[static_cast<std::size_t>(n)]; }
  bool& operator[](WhoNutrient n) { return bits[static_cast<std::size_t>(n)]; }
  int popcount() const;
};

struct PercentRange {
  double min_pct;  // inclusive
  double max_pct;  // inclusive
};

/// Intake goals. Percent goals apply to energy shares; the daily goals are
/// prorated to the recipe's portion energy over `reference_day_kcal`.
struct WhoGoals {
  PercentRange total_fat{15.0, 30.0};
  double saturated_fat_below_pct = 10.0;
  PercentRange carbohydrate{55.0, 75.0};
  double sugar_below_pct = 10.0;
  PercentRange protein{10.0, 15.0};
  double salt_below_g_per_day = 5.0;
  double cholesterol_below_mg_per_day = 300.0;
  double fiber_above_g_per_day = 25.0;
  double reference_day_kcal = 2000.0;
};

const WhoGoals& default_who_goals();

/// Day-level limit scaled to one portion of a recipe carrying
/// `portion_kcal` kcal.
double prorate_daily_goal(double daily_amount, double portion_kcal, const WhoGoals& goals);

/// Throws ScoringError for zero-energy recipes.
WhoBins who_bins(const Recipe& recipe, const WhoGoals& goals = default_who_goals());

/// 0..8, the number of goals met.
int who_health_score(const Recipe& recipe, const WhoGoals& goals = default_who_goals());

}  // namespace nudge
