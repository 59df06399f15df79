#include <gtest/gtest.h>

#include <random>

#include "nudge/error.hpp"
#include "nudge/who_scoring.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace nudge;
using nudge::test::make_recipe;

TEST(WhoScoring, WorkedExampleBits) {
  auto r = make_recipe("w", 12, 60, 4, 8, 2);
  auto bins = who_bins(r);
  EXPECT_TRUE(bins[WhoNutrient::Protein]);
  EXPECT_TRUE(bins[WhoNutrient::TotalFat]);
  EXPECT_TRUE(bins[WhoNutrient::Carbohydrate]);
  EXPECT_TRUE(bins[WhoNutrient::Sugar]);
  EXPECT_TRUE(bins[WhoNutrient::SaturatedFat]);
  // No fiber, so only the fiber goal fails among the day-level goals.
  EXPECT_TRUE(bins[WhoNutrient::Sodium]);
  EXPECT_TRUE(bins[WhoNutrient::Cholesterol]);
  EXPECT_FALSE(bins[WhoNutrient::Fiber]);
  EXPECT_EQ(who_health_score(r), 7);

  r.per_portion.sodium_mg = 5000;
  r.per_portion.cholesterol_mg = 1000;
  EXPECT_EQ(who_health_score(r), 5);
}

TEST(WhoScoring, SugarShareAboveGoal) {
  // 12 g sugar of 100 g carbohydrate, 400 kcal total from carbs -> sugar 12%.
  auto r = make_recipe("s", 0, 100, 12, 0, 0);
  EXPECT_NEAR(energy_shares(r.per_portion).sugar_pct, 12.0, 1e-9);
  EXPECT_FALSE(who_bins(r)[WhoNutrient::Sugar]);
}

TEST(WhoScoring, AllAndNoGoals) {
  // 12.5% protein, 62.5% carbohydrate, 25% fat by energy.
  auto best = make_recipe("b", 25, 125, 5, 22.2222222222, 2);
  best.per_portion.fiber_g = 20;
  EXPECT_EQ(who_health_score(best), 8);

  auto worst = make_recipe("x", 0, 60, 60, 50, 40);
  worst.per_portion.sodium_mg = 10000;
  worst.per_portion.cholesterol_mg = 5000;
  EXPECT_EQ(who_health_score(worst), 0);
}

TEST(WhoScoring, InclusivePercentBounds) {
  // Fat exactly 15% of energy: 9*f / (4*c + 9*f) = 0.15 with f=15, c=191.25.
  auto r = make_recipe("edge", 0, 191.25, 0, 15, 0);
  EXPECT_NEAR(energy_shares(r.per_portion).total_fat_pct, 15.0, 1e-12);
  EXPECT_TRUE(who_bins(r)[WhoNutrient::TotalFat]);
}

TEST(WhoScoring, ZeroEnergyIsAnError) {
  auto r = make_recipe("z", 0, 0, 0, 0, 0);
  r.per_portion.fiber_g = 5;
  EXPECT_THROW(who_health_score(r), ScoringError);
}

TEST(WhoScoring, ProrationFollowsPortionEnergy) {
  EXPECT_DOUBLE_EQ(prorate_daily_goal(25, 500, default_who_goals()), 6.25);
  WhoGoals g;
  g.reference_day_kcal = 2500;
  EXPECT_DOUBLE_EQ(prorate_daily_goal(25, 500, g), 5.0);
}

TEST(WhoScoringProperty, MatchesOracleAndPopcount) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> g(0.0, 60.0), w(40.0, 600.0);
  for (int i = 0; i < 3000; ++i) {
    double carb = g(rng), fat = g(rng) * 0.5;
    auto r = make_recipe("p", g(rng) * 0.7, carb, carb * g(rng) / 60, fat, fat * g(rng) / 60, w(rng));
    r.per_portion.sodium_mg = g(rng) * 30;
    r.per_portion.fiber_g = g(rng) / 4;
    r.per_portion.cholesterol_mg = g(rng) * 3;
    if (r.calories_per_portion <= 0) continue;
    auto bins = who_bins(r);
    EXPECT_EQ(who_health_score(r), bins.popcount());
    EXPECT_EQ(who_health_score(r), oracle::who_score(r));

    auto sweeter = r;
    sweeter.per_portion.sugar_g = std::min(r.per_portion.carbohydrate_g, r.per_portion.sugar_g + g(rng) / 4);
    EXPECT_LE(who_health_score(sweeter), who_health_score(r));
  }
}
