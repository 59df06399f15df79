#include <gtest/gtest.h>

#include "nudge/error.hpp"
#include "nudge/recommender.hpp"
#include "test_support.hpp"

using namespace nudge;
using nudge::test::features;
using nudge::test::make_recipe;

namespace {

TasteProfile taste(std::vector<std::string> liked, std::vector<std::string> disliked) {
  auto l = features("like-", 20), d = features("dislike-", 20);
  l.insert(l.end(), liked.begin(), liked.end());
  d.insert(d.end(), disliked.begin(), disliked.end());
  return build_taste_profile(l, d, {}, 30);
}

Catalog fixture_catalog() {
  auto corpus = load_corpus(test::data_dir() / "fixture_corpus.jsonl");
  auto assoc = load_associations(test::data_dir() / "fixture_associations.csv", 30);
  return build_catalog(std::move(corpus.recipes), std::move(assoc));
}

}  // namespace

TEST(TasteProfile, MinimumSizesAndOverlap) {
  EXPECT_NO_THROW(build_taste_profile(features("a", 21), features("b", 26), {}, 30));
  try {
    build_taste_profile(features("a", 19), features("b", 26), {}, 30);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "liked");
  }
  auto liked = features("a", 20), disliked = features("b", 20);
  liked.push_back("garlic");
  disliked.push_back(" Garlic ");
  try {
    build_taste_profile(liked, disliked, {}, 30);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("garlic"), std::string::npos);
  }
  EXPECT_THROW(build_taste_profile(features("a", 20), features("b", 20), {1.0, 2.0}, 30), ValidationError);
  auto p = build_taste_profile(features("A", 20), features("b", 20), {}, 30);
  EXPECT_EQ(p.topic_affinity.size(), 30u);
  EXPECT_TRUE(p.liked_features.count("a0"));
}

TEST(Recommender, ScoreCountsLikedMinusDisliked) {
  auto p = taste({"tomato", "basil", "garlic"}, {"anchovy"});
  auto r = make_recipe("s", 1, 1, 0, 1, 0);
  r.feature_tags = {"Tomato", "basil", "garlic", "anchovy", "salt"};
  EXPECT_DOUBLE_EQ(score_recipe(p, r, nullptr), 2.0);

  p.topic_affinity.assign(30, 0.0);
  p.topic_affinity[2] = 2.0;
  TopicAssociations a;
  a.scores.assign(30, 0.0);
  a.scores[2] = 0.25;
  EXPECT_DOUBLE_EQ(score_recipe(p, r, &a), 2.5);
  EXPECT_DOUBLE_EQ(score_recipe(p, r, &a, {0.0}), 2.0);
}

TEST(Recommender, RankingTiesAndTruncation) {
  auto p = taste({"x"}, {});
  std::vector<Recipe> recipes;
  for (const char* id : {"d", "b", "a", "c"}) {
    auto r = make_recipe(id, 10, 40, 2, 5, 1);
    recipes.push_back(r);
  }
  recipes[0].feature_tags = {"x"};
  auto catalog = build_catalog(recipes, {});
  auto out = recommend(p, catalog, "", 3);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].recipe.id, "d");
  EXPECT_EQ(out[1].recipe.id, "a");
  EXPECT_EQ(out[2].recipe.id, "b");
  EXPECT_TRUE(out[1].food_type_fallback);
  EXPECT_EQ(out[1].food_type, FoodType::Meal);
}

TEST(Recommender, QueryFilterAndEmptyResult) {
  auto catalog = fixture_catalog();
  auto p = taste({}, {});
  auto all = recommend(p, catalog, "", 100);
  EXPECT_EQ(all.size(), catalog.recipes.size());
  EXPECT_TRUE(recommend(p, catalog, "no-such-dish-anywhere").empty());
  auto pancakes = recommend(p, catalog, "PANCAKE");
  ASSERT_FALSE(pancakes.empty());
  for (const auto& s : pancakes) EXPECT_TRUE(matches_query(s.recipe, "pancake"));
}

TEST(Recommender, EnrichAttachesScoresAndFoodType) {
  auto catalog = fixture_catalog();
  const Recipe* r2 = catalog.find("r002");
  ASSERT_NE(r2, nullptr);
  auto s = enrich(catalog, *r2, 0.0);
  EXPECT_EQ(s.food_type, FoodType::Meal);
  EXPECT_FALSE(s.food_type_fallback);
  EXPECT_GE(s.who_score, 0);
  EXPECT_LE(s.who_score, 8);
  EXPECT_GE(s.fsa.score, 4);

  EXPECT_EQ(classify(catalog, *catalog.find("r005")).first, FoodType::Breakfast);
  EXPECT_EQ(classify(catalog, *catalog.find("r004")).first, FoodType::Drink);
  EXPECT_EQ(catalog.find("nope"), nullptr);
}

TEST(Recommender, ZeroEnergyRecipesAreExcluded) {
  std::vector<ExcludedRecipe> excluded;
  auto catalog = build_catalog({make_recipe("ok", 1, 1, 0, 1, 0), make_recipe("zero", 0, 0, 0, 0, 0)}, {}, &excluded);
  EXPECT_EQ(catalog.recipes.size(), 1u);
  ASSERT_EQ(excluded.size(), 1u);
  EXPECT_EQ(excluded[0].id, "zero");
}
