#include "nudge/reports.hpp"

#include <fmt/format.h>

#include "nudge/error.hpp"
#include "nudge/fsa_scoring.hpp"
#include "nudge/portion.hpp"
#include "nudge/who_scoring.hpp"

namespace nudge {

namespace {

std::vector<ScoreBucket> buckets(int lo, int hi) {
  std::vector<ScoreBucket> out;
  for (int s = lo; s <= hi; ++s) out.push_back({s, 0, 0.0});
  return out;
}

void finish(std::vector<ScoreBucket>& b, std::size_t scored) {
  for (auto& x : b) x.percent = scored == 0 ? 0.0 : 100.0 * static_cast<double>(x.count) / static_cast<double>(scored);
}

nlohmann::json to_json(const std::vector<ScoreBucket>& b) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : b) out.push_back({{"score", x.score}, {"count", x.count}, {"percent", x.percent}});
  return out;
}

}  // namespace

ScoreDistribution score_distribution(const std::vector<Recipe>& recipes, const EngineConfig& config) {
  ScoreDistribution d;
  d.total = recipes.size();
  d.who = buckets(0, 8);
  d.fsa = buckets(4, 16);
  for (const auto& r : recipes) {
    try {
      int w = who_health_score(r, config.who);
      int f = fsa_health_score(r, config.fsa).score;
      ++d.who[static_cast<std::size_t>(w)].count;
      ++d.fsa[static_cast<std::size_t>(f - 4)].count;
    } catch (const ScoringError&) {
      ++d.unscored;
    }
  }
  finish(d.who, d.total - d.unscored);
  finish(d.fsa, d.total - d.unscored);
  return d;
}

nlohmann::json to_json(const ScoreDistribution& d) {
  return {{"total", d.total}, {"unscored", d.unscored}, {"who", to_json(d.who)}, {"fsa", to_json(d.fsa)}};
}

std::string format_distribution(const ScoreDistribution& d) {
  std::string out = fmt::format("recipes: {} (unscored: {})\n\n", d.total, d.unscored);
  out += fmt::format("{:<16} {:>10} {:>9}\n", "WHO-HealthScore", "count", "percent");
  for (const auto& b : d.who) out += fmt::format("{:<16} {:>10} {:>8.2f}%\n", b.score, b.count, b.percent);
  out += fmt::format("\n{:<16} {:>10} {:>9}\n", "FSA-HealthScore", "count", "percent");
  for (const auto& b : d.fsa) out += fmt::format("{:<16} {:>10} {:>8.2f}%\n", b.score, b.count, b.percent);
  return out;
}

std::vector<TargetRow> target_table(const HealthProfile& profile, int meals_per_day, const CalorieShareTable& shares) {
  std::vector<TargetRow> rows;
  for (auto t : kAllFoodTypes) {
    rows.push_back({t, shares.percent(meals_per_day, t), target_calories(profile, t, meals_per_day, shares)});
  }
  return rows;
}

std::string format_profile(const UserHealthInput& in, const HealthProfile& p, const std::vector<TargetRow>& targets) {
  std::string out;
  out += fmt::format("input            {} {:g} y, {:g} kg, {:g} m, {}, {} meals/day\n", to_string(in.gender),
                     in.age_years, in.weight_kg, in.height_m, to_string(in.activity), in.meals_per_day);
  out += fmt::format("BMR              {:.2f} kcal/day\n", p.bmr_kcal);
  out += fmt::format("DCI              {:.2f} kcal/day\n", p.dci_kcal);
  out += fmt::format("BMI              {:.2f} ({})\n", p.bmi, to_string(p.risk_class));
  out += fmt::format("adjustment       {:+.2f} kcal/day\n", p.energy_adjustment_kcal);
  out += fmt::format("DRCI             {:.2f} kcal/day{}\n", p.drci_kcal,
                     p.floor_applied ? " (clamped to the safety floor)" : "");
  out += fmt::format("\n{:<12} {:>8} {:>12}\n", "food type", "share", "target kcal");
  for (const auto& r : targets) {
    out += fmt::format("{:<12} {:>7.1f}% {:>12.2f}\n", to_string(r.food_type), r.percent, r.target_kcal);
  }
  return out;
}

}  // namespace nudge
