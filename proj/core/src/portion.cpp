#include "nudge/portion.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include <fmt/format.h>

#include "nudge/error.hpp"

namespace nudge {

void CalorieShareTable::set(int meals_per_day, FoodType type, double percent) {
  if (!(percent > 0.0 && percent < 100.0)) {
    throw ConfigError(fmt::format("share for {}-meal {} must be in (0, 100), got {}", meals_per_day,
                                  to_string(type), percent));
  }
  cells_[{meals_per_day, type}] = percent;
}

double CalorieShareTable::percent(int meals_per_day, FoodType type) const {
  auto it = cells_.find({meals_per_day, type});
  if (it == cells_.end()) {
    throw ConfigError(fmt::format("no calorie share for {} in {}-meal mode", to_string(type), meals_per_day));
  }
  return it->second;
}

bool CalorieShareTable::contains(int meals_per_day, FoodType type) const {
  return cells_.count({meals_per_day, type}) != 0;
}

const CalorieShareTable& default_share_table() {
  static const CalorieShareTable table = [] {
    CalorieShareTable t;
    t.set(3, FoodType::Breakfast, 20.0);
    t.set(3, FoodType::Meal, 30.0);
    t.set(3, FoodType::Drink, 7.5);
    t.set(3, FoodType::Snack, 10.0);
    t.set(3, FoodType::Side, 12.5);
    // Two-meal days: breakfast takes the first meal, "meal" the second.
    t.set(2, FoodType::Breakfast, 37.5);
    t.set(2, FoodType::Meal, 42.5);
    t.set(2, FoodType::Drink, 12.5);
    t.set(2, FoodType::Snack, 10.0);
    t.set(2, FoodType::Side, 12.5);
    return t;
  }();
  return table;
}

CalorieShareTable parse_share_overrides(std::istream& in, CalorieShareTable base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      auto pos = line.find(',', start);
      std::string cell = line.substr(start, pos - start);
      auto b = cell.find_first_not_of(" \t\r");
      auto e = cell.find_last_not_of(" \t\r");
      cols.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (cols.size() != 3) throw ConfigError(fmt::format("share table line {}: expected 3 columns", line_no));
    int meals = 0;
    double pct = 0.0;
    try {
      meals = std::stoi(cols[0]);
      pct = std::stod(cols[2]);
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("share table line {}: bad number", line_no));
    }
    if (meals != 2 && meals != 3) throw ConfigError(fmt::format("share table line {}: meals must be 2 or 3", line_no));
    base.set(meals, parse_food_type(cols[1]), pct);
  }
  return base;
}

CalorieShareTable load_share_overrides(const std::filesystem::path& path, CalorieShareTable base) {
  std::ifstream in(path);
  if (!in) throw LoadError(fmt::format("cannot open share table: {}", path.string()));
  return parse_share_overrides(in, std::move(base));
}

double target_calories(const HealthProfile& profile, FoodType type, int meals_per_day,
                       const CalorieShareTable& table) {
  return profile.drci_kcal * table.percent(meals_per_day, type) / 100.0;
}

std::string format_portions(double portions) { return fmt::format("{:.2f}", portions); }

PortionRecommendation portion_size(double target_kcal, const Recipe& recipe, FoodType type) {
  if (!(recipe.calories_per_portion > 0.0)) {
    throw ScoringError(fmt::format("recipe {} has no calories per portion", recipe.id));
  }
  PortionRecommendation rec;
  rec.recipe_id = recipe.id;
  rec.target_kcal = target_kcal;
  rec.calories_per_portion = recipe.calories_per_portion;
  rec.portions = target_kcal / recipe.calories_per_portion;
  rec.fits = recipe.calories_per_portion <= target_kcal;
  rec.explanation = explain_portion(rec, type);
  return rec;
}

std::string explain_portion(const PortionRecommendation& rec, FoodType type) {
  const std::string amount = format_portions(rec.portions);
  if (!rec.fits) {
    return fmt::format(
        "One portion of this recipe has {:.0f} kcal, which is more than your {} calorie target of {:.0f} kcal. "
        "We recommend {} of a portion so the {} stays within your daily calorie budget. "
        "If you would like a larger serving, try searching for similar recipes with fewer calories.",
        rec.calories_per_portion, to_string(type), rec.target_kcal, amount, to_string(type));
  }
  const bool occasional = type == FoodType::Snack || type == FoodType::Drink;
  if (rec.portions > 1.0 && occasional) {
    return fmt::format(
        "We recommend up to {} portions of this recipe. Please divide the consumption into multiple occasions "
        "and keep time gaps between consumption events.",
        amount);
  }
  return fmt::format("We recommend {} {} of this recipe.", amount, rec.portions == 1.0 ? "portion" : "portions");
}

}  // namespace nudge
