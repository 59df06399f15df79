#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "nudge/error.hpp"
#include "nudge/fsa_scoring.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace nudge;
using nudge::test::make_recipe;

namespace {

Recipe fsa_recipe(double fat, double sat, double sugar, double salt_g) {
  auto r = make_recipe("f", 5, 40, sugar, fat, sat, 100);
  r.per_portion.sodium_mg = salt_g * 1000 / 2.5;
  return r;
}

}  // namespace

TEST(FsaScoring, VeryHighBoundsAreOneAndAHalfTimesHigh) {
  const auto& cfg = default_fsa_config();
  const double expected[] = {26.25, 7.5, 33.75, 2.25};
  for (std::size_t i = 0; i < kFsaNutrientCount; ++i) {
    EXPECT_EQ(cfg.bounds[i].high_max, expected[i]);
    EXPECT_EQ(cfg.bounds[i].high_max, traffic_light_bounds()[i].medium_max * 1.5);
  }
}

TEST(FsaScoring, TotalFatBands) {
  EXPECT_EQ(fsa_band(FsaNutrient::TotalFat, 2.0), (FsaBand{FsaLevel::Low, FsaColor::Green}));
  EXPECT_EQ(fsa_band(FsaNutrient::TotalFat, 3.0).level, FsaLevel::Low);
  EXPECT_EQ(fsa_band(FsaNutrient::TotalFat, 17.5).level, FsaLevel::Medium);
  EXPECT_EQ(fsa_band(FsaNutrient::TotalFat, 20.0), (FsaBand{FsaLevel::High, FsaColor::Red}));
  EXPECT_EQ(fsa_band(FsaNutrient::TotalFat, 26.25).level, FsaLevel::High);
  EXPECT_EQ(fsa_band(FsaNutrient::TotalFat, 30.0), (FsaBand{FsaLevel::VeryHigh, FsaColor::Brown}));
  EXPECT_THROW(fsa_band(FsaNutrient::Salt, -0.1), ValidationError);
}

TEST(FsaScoring, ScoreAndColorExamples) {
  auto all_low = fsa_health_score(fsa_recipe(1, 0.5, 2, 0.1));
  EXPECT_EQ(all_low.score, 4);
  EXPECT_EQ(all_low.color_code, FsaColor::Green);

  auto all_very_high = fsa_health_score(fsa_recipe(40, 10, 35, 3));
  EXPECT_EQ(all_very_high.score, 16);
  EXPECT_EQ(all_very_high.color_code, FsaColor::Brown);

  auto mixed = fsa_health_score(fsa_recipe(20, 3, 10, 0.2));
  EXPECT_EQ(mixed.bands[0].level, FsaLevel::High);
  EXPECT_EQ(mixed.bands[1].level, FsaLevel::Medium);
  EXPECT_EQ(mixed.bands[2].level, FsaLevel::Medium);
  EXPECT_EQ(mixed.bands[3].level, FsaLevel::Low);
  EXPECT_EQ(mixed.score, 8);
  EXPECT_EQ(mixed.color_code, FsaColor::Amber);
}

TEST(FsaScoring, EpochsPartitionTheScale) {
  EXPECT_EQ(color_for_score(7), FsaColor::Green);
  EXPECT_EQ(color_for_score(8), FsaColor::Amber);
  EXPECT_EQ(color_for_score(11), FsaColor::Amber);
  EXPECT_EQ(color_for_score(12), FsaColor::Red);
  EXPECT_EQ(color_for_score(14), FsaColor::Red);
  EXPECT_EQ(color_for_score(15), FsaColor::Brown);
  EXPECT_NO_THROW(validate_epochs(default_fsa_config().epochs));
  EXPECT_THROW(validate_epochs({{4, 7, FsaColor::Green}, {9, 16, FsaColor::Red}}), ConfigError);
  EXPECT_THROW(validate_epochs({{4, 8, FsaColor::Green}, {8, 16, FsaColor::Red}}), ConfigError);
}

TEST(FsaScoring, FibreThresholdIsInclusive) {
  auto r = fsa_recipe(1, 0.5, 2, 0.1);
  r.per_portion.fiber_g = 4;
  EXPECT_EQ(fibre_score(r), 1);
  r.per_portion.fiber_g = 0;
  EXPECT_EQ(fibre_score(r), 0);
  r.per_portion.fiber_g = 3.0;
  EXPECT_EQ(fibre_score(r), 1);
}

TEST(FsaScoring, ScoresUsePer100gValues) {
  // 10 g fat in a 50 g portion is 20 g/100 g.
  auto r = make_recipe("half", 1, 10, 1, 10, 1, 50);
  EXPECT_EQ(fsa_health_score(r).bands[0].level, FsaLevel::High);
}

TEST(FsaScoringProperty, GridMatchesTableOracle) {
  // Values straddling every bound of every nutrient.
  std::vector<std::vector<double>> grid(4);
  for (int row = 0; row < 4; ++row) {
    grid[row].push_back(0.0);
    for (double b : oracle::kFsaTable[row]) {
      grid[row].push_back(b * 0.999);
      grid[row].push_back(b);
      grid[row].push_back(b * 1.001);
    }
  }
  for (double fat : grid[0]) {
    for (double sat : grid[1]) {
      if (sat > fat) continue;
      for (double sugar : grid[2]) {
        for (double salt : grid[3]) {
          auto r = make_recipe("g", 5, 40, sugar, fat, sat, 100);
          r.per_portion.carbohydrate_g = std::max(40.0, sugar);
          r.per_portion.sodium_mg = salt * 400;
          auto s = fsa_health_score(r);
          ASSERT_EQ(s.score, oracle::fsa_score(r)) << fat << " " << sat << " " << sugar << " " << salt;
          int sum = 0;
          for (const auto& b : s.bands) sum += b.value();
          EXPECT_EQ(s.score, sum);
          EXPECT_GE(s.score, 4);
          EXPECT_LE(s.score, 16);
          EXPECT_EQ(s.color_code, color_for_score(s.score));
        }
      }
    }
  }
}

TEST(FsaScoringProperty, MoreOfAnyNutrientNeverLowersScore) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> g(0.0, 40.0), bump(0.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    double fat = g(rng), sugar = g(rng);
    auto r = make_recipe("m", 5, 50, sugar, fat, fat * 0.3, 100);
    r.per_portion.sodium_mg = g(rng) * 30;
    const int base = fsa_health_score(r).score;
    for (int which = 0; which < 4; ++which) {
      auto more = r;
      const double d = bump(rng);
      switch (which) {
        case 0: more.per_portion.total_fat_g += d; break;
        case 1: more.per_portion.saturated_fat_g = std::min(more.per_portion.total_fat_g, more.per_portion.saturated_fat_g + d); break;
        case 2: more.per_portion.sugar_g = std::min(more.per_portion.carbohydrate_g, more.per_portion.sugar_g + d); break;
        default: more.per_portion.sodium_mg += d * 100; break;
      }
      EXPECT_GE(fsa_health_score(more).score, base);
    }
  }
}
