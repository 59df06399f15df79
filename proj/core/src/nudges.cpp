#include "nudge/nudges.hpp"

#include <cmath>
#include <set>

#include <fmt/format.h>

#include "nudge/error.hpp"

namespace nudge {

namespace {

constexpr std::string_view kDrciSource =
    "Portion sizes use the WHO Technical Report Series 724 BMR equations, NRC activity factors, "
    "WHO adult BMI risk classes, the NCCOR 10 kcal per pound energy adjustment and the NHS "
    "calorie distribution over meals.";
constexpr std::string_view kWhoSource =
    "The score counts how many of eight WHO/FAO nutrient intake goals (protein, carbohydrate, sugar, "
    "sodium, total fat, saturated fat, dietary fibre, cholesterol) this recipe meets.";
constexpr std::string_view kFsaSource =
    "Colors follow the UK Food Standards Agency traffic-light thresholds for fat, saturated fat, sugars "
    "and salt per 100 g, with an extra brown band for very high levels.";

constexpr double kKcalTolerance = 1e-9;

void check_consistent(const HealthProfile& profile, const ScoredRecipe& rec, const PortionRecommendation& portion) {
  if (portion.recipe_id != rec.recipe.id) {
    throw ContractError(fmt::format("portion for recipe '{}' passed with recipe '{}'", portion.recipe_id,
                                    rec.recipe.id));
  }
  if (portion.calories_per_portion != rec.recipe.calories_per_portion) {
    throw ContractError("portion calories do not match the recipe");
  }
  if (!(portion.target_kcal > 0.0) || portion.target_kcal > profile.drci_kcal * (1.0 + kKcalTolerance)) {
    throw ContractError("portion target is not a share of this profile's DRCI");
  }
}

std::string color_legend(const FsaConfig& fsa) {
  std::string out;
  for (const auto& e : fsa.epochs) {
    if (!out.empty()) out += ", ";
    out += fmt::format("{} {}-{}", to_string(e.color), e.min_score, e.max_score);
  }
  return out;
}

}  // namespace

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::DrciMlcp: return "DRCI_MLCP";
    case ScenarioKind::WhoBubbleSlider: return "WHO_BUBBLESLIDER";
    case ScenarioKind::FsaColorCoding: return "FSA_COLORCODING";
    case ScenarioKind::NoNudge: return "NO_NUDGE";
  }
  return "NO_NUDGE";
}

ScenarioKind parse_scenario(std::string_view s) {
  for (auto k : kAllScenarios) {
    if (to_string(k) == s) return k;
  }
  throw ValidationError("scenario", fmt::format("unknown scenario '{}'", s));
}

bool is_nudged(ScenarioKind k) { return k != ScenarioKind::NoNudge; }

std::string_view to_string(BadgeKind k) {
  switch (k) {
    case BadgeKind::Calorie: return "calorie";
    case BadgeKind::WhoScore: return "who_score";
    case BadgeKind::FsaColor: return "fsa_color";
    case BadgeKind::None: return "none";
  }
  return "none";
}

PseudoNames::PseudoNames() : PseudoNames({"Aqua", "Mint", "Kiwi", "Berry"}) {}

PseudoNames::PseudoNames(std::array<std::string, kScenarioCount> names) : names_(std::move(names)) {
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty() || !seen.insert(n).second) throw ConfigError("pseudo names must be distinct and non-empty");
    for (auto k : kAllScenarios) {
      if (to_string(k) == n) throw ConfigError("pseudo names must differ from scenario kind names");
    }
  }
}

std::optional<ScenarioKind> PseudoNames::resolve(std::string_view name) const {
  for (auto k : kAllScenarios) {
    if (name_of(k) == name || to_string(k) == name) return k;
  }
  return std::nullopt;
}

double round_portions(double portions) { return std::round(portions * 100.0) / 100.0; }

WidgetPayload build_widget(ScenarioKind scenario, const HealthProfile& profile, const ScoredRecipe& rec,
                           const PortionRecommendation& portion, const FsaConfig& fsa) {
  check_consistent(profile, rec, portion);

  WidgetPayload w;
  w.scenario = scenario;
  switch (scenario) {
    case ScenarioKind::DrciMlcp:
      w.source_note = std::string(kDrciSource);
      w.sections.push_back({"top",
                            fmt::format("Your BMR is {:.0f} kcal/day and your health-aware daily calorie "
                                        "intake is {:.0f} kcal/day.",
                                        profile.bmr_kcal, profile.drci_kcal),
                            {{"bmr_kcal", profile.bmr_kcal}, {"drci_kcal", profile.drci_kcal}}});
      w.sections.push_back({"second_from_top",
                            fmt::format("One portion contains {:.0f} kcal.", rec.recipe.calories_per_portion),
                            {{"calories_per_portion", rec.recipe.calories_per_portion}}});
      w.sections.push_back({"third_from_top",
                            portion.explanation,
                            {{"portions", round_portions(portion.portions)},
                             {"target_kcal", portion.target_kcal},
                             {"fits", portion.fits},
                             {"food_type", std::string(to_string(rec.food_type))}}});
      w.sections.push_back({"bottom", w.source_note, {}});
      break;
    case ScenarioKind::WhoBubbleSlider:
      w.source_note = std::string(kWhoSource);
      w.sections.push_back({"top",
                            "The scale runs from 0 (very unhealthy) at the bottom to 8 (very healthy) at the "
                            "top. The higher the bubble, the healthier the recipe.",
                            {}});
      w.sections.push_back({"second_from_top",
                            fmt::format("WHO-HealthScore {} of 8", rec.who_score),
                            {{"bubble_position", static_cast<double>(rec.who_score)},
                             {"scale_min", 0.0},
                             {"scale_max", 8.0}}});
      w.sections.push_back({"bottom", w.source_note, {}});
      break;
    case ScenarioKind::FsaColorCoding:
      w.source_note = std::string(kFsaSource);
      w.sections.push_back({"top",
                            rec.fsa.fibre_score == 1 ? "This recipe is a good source of fibre."
                                                     : std::string{},
                            {{"disk_color", std::string(to_string(rec.fsa.color_code))},
                             {"fibre_ribbon", rec.fsa.fibre_score == 1},
                             {"fsa_score", static_cast<double>(rec.fsa.score)}}});
      w.sections.push_back({"second_from_top",
                            "Green recipes are healthy, amber moderately healthy, red unhealthy and brown very "
                            "unhealthy. A blue ribbon marks a source of fibre.",
                            {{"legend", color_legend(fsa)}}});
      w.sections.push_back({"bottom", w.source_note, {}});
      break;
    case ScenarioKind::NoNudge:
      break;
  }
  return w;
}

BadgePayload build_badge(ScenarioKind scenario, const ScoredRecipe& rec) {
  switch (scenario) {
    case ScenarioKind::DrciMlcp:
      return {BadgeKind::Calorie, static_cast<int>(std::lround(rec.recipe.calories_per_portion))};
    case ScenarioKind::WhoBubbleSlider:
      return {BadgeKind::WhoScore, rec.who_score};
    case ScenarioKind::FsaColorCoding:
      return {BadgeKind::FsaColor, std::string(to_string(rec.fsa.color_code))};
    case ScenarioKind::NoNudge:
      break;
  }
  return {BadgeKind::None, std::monostate{}};
}

nlohmann::json to_json(const WidgetPayload& w) {
  nlohmann::json sections = nlohmann::json::array();
  for (const auto& s : w.sections) {
    nlohmann::json fields = nlohmann::json::object();
    for (const auto& f : s.fields) {
      std::visit([&](const auto& v) { fields[f.name] = v; }, f.value);
    }
    sections.push_back({{"role", s.role}, {"text", s.text}, {"fields", fields}});
  }
  return {{"scenario", to_string(w.scenario)}, {"sections", sections}, {"source_note", w.source_note}};
}

nlohmann::json to_json(const BadgePayload& b) {
  nlohmann::json j = {{"kind", to_string(b.kind)}};
  if (const int* i = std::get_if<int>(&b.value)) j["value"] = *i;
  if (const std::string* s = std::get_if<std::string>(&b.value)) j["value"] = *s;
  return j;
}

}  // namespace nudge
