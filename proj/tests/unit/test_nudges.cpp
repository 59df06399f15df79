#include <gtest/gtest.h>

#include "nudge/error.hpp"
#include "nudge/nudges.hpp"
#include "test_support.hpp"

using namespace nudge;
using nudge::test::make_recipe;

namespace {

struct Fixture {
  HealthProfile profile;
  ScoredRecipe rec;
  PortionRecommendation portion;
};

Fixture fixture(double kcal_target = 600) {
  Fixture f;
  f.profile.bmr_kcal = 1700;
  f.profile.drci_kcal = 2000;
  f.rec.recipe = make_recipe("r1", 30, 80, 6, 40, 10);
  f.rec.recipe.calories_per_portion = 1048;
  f.rec.who_score = 5;
  f.rec.fsa.score = 9;
  f.rec.fsa.color_code = FsaColor::Amber;
  f.rec.fsa.fibre_score = 1;
  f.rec.food_type = FoodType::Meal;
  f.portion = portion_size(kcal_target, f.rec.recipe, FoodType::Meal);
  return f;
}

const WidgetField* field(const WidgetSection& s, const std::string& name) {
  for (const auto& f : s.fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

}  // namespace

TEST(Nudges, ScenarioNamesAndPseudoNames) {
  for (auto k : kAllScenarios) EXPECT_EQ(parse_scenario(to_string(k)), k);
  EXPECT_THROW(parse_scenario("FOO"), ValidationError);
  EXPECT_TRUE(is_nudged(ScenarioKind::DrciMlcp));
  EXPECT_FALSE(is_nudged(ScenarioKind::NoNudge));

  PseudoNames names;
  EXPECT_EQ(names.name_of(ScenarioKind::WhoBubbleSlider), "Mint");
  EXPECT_EQ(names.resolve("Berry"), ScenarioKind::NoNudge);
  EXPECT_EQ(names.resolve("FSA_COLORCODING"), ScenarioKind::FsaColorCoding);
  EXPECT_FALSE(names.resolve("Lemon").has_value());
  EXPECT_THROW(PseudoNames({"a", "a", "b", "c"}), ConfigError);
  EXPECT_THROW(PseudoNames({"a", "", "b", "c"}), ConfigError);
}

TEST(Nudges, DrciWidgetLayout) {
  auto f = fixture();
  auto w = build_widget(ScenarioKind::DrciMlcp, f.profile, f.rec, f.portion);
  ASSERT_EQ(w.sections.size(), 4u);
  EXPECT_EQ(w.sections[0].role, "top");
  EXPECT_EQ(std::get<double>(field(w.sections[0], "drci_kcal")->value), 2000.0);
  EXPECT_EQ(w.sections[1].role, "second_from_top");
  EXPECT_EQ(std::get<double>(field(w.sections[1], "calories_per_portion")->value), 1048.0);
  EXPECT_EQ(w.sections[2].role, "third_from_top");
  EXPECT_EQ(std::get<double>(field(w.sections[2], "portions")->value), 0.57);
  EXPECT_FALSE(std::get<bool>(field(w.sections[2], "fits")->value));
  EXPECT_EQ(w.sections[2].text, f.portion.explanation);
  EXPECT_EQ(w.sections[3].role, "bottom");
  EXPECT_FALSE(w.source_note.empty());
}

TEST(Nudges, WhoAndFsaWidgets) {
  auto f = fixture();
  auto who = build_widget(ScenarioKind::WhoBubbleSlider, f.profile, f.rec, f.portion);
  ASSERT_EQ(who.sections.size(), 3u);
  EXPECT_EQ(std::get<double>(field(who.sections[1], "bubble_position")->value), 5.0);
  EXPECT_EQ(std::get<double>(field(who.sections[1], "scale_max")->value), 8.0);

  auto fsa = build_widget(ScenarioKind::FsaColorCoding, f.profile, f.rec, f.portion);
  EXPECT_EQ(std::get<std::string>(field(fsa.sections[0], "disk_color")->value), "amber");
  EXPECT_TRUE(std::get<bool>(field(fsa.sections[0], "fibre_ribbon")->value));
  auto j = to_json(fsa);
  EXPECT_EQ(j["scenario"], "FSA_COLORCODING");
  EXPECT_EQ(j["sections"][0]["fields"]["fsa_score"], 9.0);
}

TEST(Nudges, NoNudgeCarriesNoHealthInformation) {
  auto f = fixture();
  auto w = build_widget(ScenarioKind::NoNudge, f.profile, f.rec, f.portion);
  EXPECT_TRUE(w.sections.empty());
  EXPECT_TRUE(w.source_note.empty());
  auto badge = build_badge(ScenarioKind::NoNudge, f.rec);
  EXPECT_EQ(badge.kind, BadgeKind::None);
  EXPECT_EQ(to_json(badge), nlohmann::json({{"kind", "none"}}));
}

TEST(Nudges, Badges) {
  auto f = fixture();
  EXPECT_EQ(std::get<int>(build_badge(ScenarioKind::DrciMlcp, f.rec).value), 1048);
  EXPECT_EQ(std::get<int>(build_badge(ScenarioKind::WhoBubbleSlider, f.rec).value), 5);
  EXPECT_EQ(std::get<std::string>(build_badge(ScenarioKind::FsaColorCoding, f.rec).value), "amber");
  EXPECT_EQ(to_json(build_badge(ScenarioKind::WhoBubbleSlider, f.rec))["kind"], "who_score");
}

TEST(Nudges, ContractViolations) {
  auto f = fixture();
  auto other = f.portion;
  other.recipe_id = "r2";
  EXPECT_THROW(build_widget(ScenarioKind::DrciMlcp, f.profile, f.rec, other), ContractError);
  auto too_big = fixture(2500);
  EXPECT_THROW(build_widget(ScenarioKind::DrciMlcp, too_big.profile, too_big.rec, too_big.portion), ContractError);
  auto wrong_kcal = f.portion;
  wrong_kcal.calories_per_portion = 1000;
  EXPECT_THROW(build_widget(ScenarioKind::DrciMlcp, f.profile, f.rec, wrong_kcal), ContractError);
}

TEST(Nudges, RoundPortions) {
  EXPECT_DOUBLE_EQ(round_portions(0.57251908), 0.57);
  EXPECT_DOUBLE_EQ(round_portions(1.005001), 1.01);
  EXPECT_DOUBLE_EQ(round_portions(2.0), 2.0);
}
