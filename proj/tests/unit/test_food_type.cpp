#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "nudge/error.hpp"
#include "nudge/food_type.hpp"
#include "test_support.hpp"

using namespace nudge;

namespace {

TopicAssociations r2_vector() {
  TopicAssociations a;
  a.scores.assign(30, 0.0);
  const std::pair<int, double> cells[] = {{1, 0.009}, {2, 0.341}, {3, 0.604}, {4, 0.105}, {5, 0.354},
                                          {6, 0.003}, {7, 0.4},   {8, 0.281}, {28, 0.108}, {29, 0.201},
                                          {30, 0.109}};
  for (auto [id, v] : cells) a.scores[id - 1] = v;
  return a;
}

TopicAssociations single(int topic_id, double v = 0.8) {
  TopicAssociations a;
  a.scores.assign(30, 0.0);
  a.scores[topic_id - 1] = v;
  return a;
}

}  // namespace

TEST(FoodType, DefaultTableHasThirtyLabelledTopics) {
  const auto& t = default_topic_table();
  ASSERT_EQ(t.size(), 30u);
  EXPECT_EQ(t.at(t.index_of(17)).food_type, FoodType::Drink);
  EXPECT_EQ(t.at(t.index_of(11)).food_type, FoodType::Breakfast);
  EXPECT_EQ(t.at(t.index_of(19)).food_type, FoodType::Meal);
  EXPECT_THROW(t.index_of(31), ConfigError);
}

TEST(FoodType, BundledTopicFileMatchesDefaults) {
  auto t = load_topic_table(test::data_dir() / "topics.tsv");
  ASSERT_EQ(t.size(), default_topic_table().size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(t.at(i).id, default_topic_table().at(i).id);
    EXPECT_EQ(t.at(i).food_type, default_topic_table().at(i).food_type);
  }
}

TEST(FoodType, TopTopicsForR2) {
  auto top = top_topics(r2_vector(), default_topic_table());
  const int expected[] = {3, 7, 5, 2, 8, 29, 30};
  ASSERT_EQ(top.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(top[i].topic_id, expected[i]);
  EXPECT_DOUBLE_EQ(top[0].score, 0.604);
}

TEST(FoodType, TopTopicsDegenerateCases) {
  TopicAssociations zero;
  zero.scores.assign(30, 0.0);
  auto top = top_topics(zero, default_topic_table());
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(top[i].topic_id, static_cast<int>(i + 1));

  auto one = top_topics(single(22), default_topic_table());
  EXPECT_EQ(one[0].topic_id, 22);
}

TEST(FoodType, R2PredictsMeal) {
  auto scores = food_type_scores(r2_vector(), default_topic_table());
  EXPECT_NEAR(scores[static_cast<std::size_t>(FoodType::Meal)], 1.686, 1e-12);
  EXPECT_NEAR(scores[static_cast<std::size_t>(FoodType::Side)], 0.604, 1e-12);
  EXPECT_EQ(predict_food_type(r2_vector(), default_topic_table()), FoodType::Meal);
}

TEST(FoodType, SmoothieTopicIsDrink) {
  EXPECT_EQ(predict_food_type(single(17), default_topic_table()), FoodType::Drink);
}

TEST(FoodType, TieGoesToTypeWithHighestTopic) {
  TopicAssociations a;
  a.scores.assign(30, 0.0);
  a.scores[0] = 0.5;  // T1 snack
  a.scores[1] = 0.3;  // T2 meal
  a.scores[4] = 0.2;  // T5 meal
  EXPECT_EQ(predict_food_type(a, default_topic_table()), FoodType::Snack);
}

TEST(FoodType, NoSignalIsAnError) {
  TopicAssociations zero;
  zero.scores.assign(30, 0.0);
  EXPECT_THROW(predict_food_type(zero, default_topic_table()), ScoringError);
}

TEST(FoodType, AssociationValidation) {
  TopicAssociations bad;
  bad.scores.assign(29, 0.1);
  EXPECT_THROW(validate_associations(bad, 30), ValidationError);
  bad.scores.assign(30, 0.1);
  bad.scores[3] = -0.2;
  EXPECT_THROW(validate_associations(bad, 30), ValidationError);
  auto m = load_associations(test::data_dir() / "fixture_associations.csv", 30);
  EXPECT_EQ(m.size(), 20u);
}

TEST(FoodType, BreakfastReclassification) {
  BreakfastDictionary dict;
  Recipe r;
  r.title = "Blueberry Pancakes";
  EXPECT_EQ(breakfast_reclassify(r, FoodType::Snack, dict), FoodType::Breakfast);
  r.title = "Garlic Rice";
  EXPECT_EQ(breakfast_reclassify(r, FoodType::Side, dict), FoodType::Side);
  r.title = "Breakfast Burrito";
  EXPECT_EQ(breakfast_reclassify(r, FoodType::Meal, dict), FoodType::Meal);
  r.title = "Roast vegetables";
  r.dish_annotations = {"Granola"};
  EXPECT_EQ(breakfast_reclassify(r, FoodType::Side, dict), FoodType::Breakfast);
  EXPECT_FALSE(dict.matches("Toaster oven fries"));
  EXPECT_TRUE(dict.matches("French TOAST"));
}

TEST(FoodTypeProperty, TopSevenOnlyScaleInvariantAndPartition) {
  const auto& table = default_topic_table();
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    TopicAssociations a;
    for (int t = 0; t < 30; ++t) a.scores.push_back(u(rng));
    const auto top = top_topics(a, table);
    const FoodType base = predict_food_type(a, table);

    auto scaled = a;
    for (auto& s : scaled.scores) s *= 3.7;
    EXPECT_EQ(predict_food_type(scaled, table), base);

    const auto by_type = food_type_scores(a, table);
    double top_sum = 0;
    for (const auto& t : top) top_sum += t.score;
    EXPECT_NEAR(std::accumulate(by_type.begin(), by_type.end(), 0.0), top_sum, 1e-12);

    auto perturbed = a;
    const double seventh = top.back().score;
    for (int t = 0; t < 30; ++t) {
      const bool in_top = std::any_of(top.begin(), top.end(), [&](const RankedTopic& r) { return r.topic_id == t + 1; });
      if (!in_top) perturbed.scores[t] = u(rng) * seventh * 0.999;
    }
    EXPECT_EQ(predict_food_type(perturbed, table), base);
  }
}
