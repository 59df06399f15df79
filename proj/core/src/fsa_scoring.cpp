#include "nudge/fsa_scoring.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "nudge/error.hpp"

namespace nudge {

std::string_view to_string(FsaNutrient n) {
  switch (n) {
    case FsaNutrient::TotalFat: return "total_fat";
    case FsaNutrient::SaturatedFat: return "saturated_fat";
    case FsaNutrient::Sugar: return "sugar";
    case FsaNutrient::Salt: return "salt";
  }
  return "total_fat";
}

std::string_view to_string(FsaLevel l) {
  switch (l) {
    case FsaLevel::Low: return "LOW";
    case FsaLevel::Medium: return "MEDIUM";
    case FsaLevel::High: return "HIGH";
    case FsaLevel::VeryHigh: return "VERY_HIGH";
  }
  return "LOW";
}

std::string_view to_string(FsaColor c) {
  switch (c) {
    case FsaColor::Green: return "green";
    case FsaColor::Amber: return "amber";
    case FsaColor::Red: return "red";
    case FsaColor::Brown: return "brown";
  }
  return "green";
}

FsaColor parse_fsa_color(std::string_view s) {
  if (s == "green") return FsaColor::Green;
  if (s == "amber") return FsaColor::Amber;
  if (s == "red") return FsaColor::Red;
  if (s == "brown") return FsaColor::Brown;
  throw ConfigError(fmt::format("unknown FSA color '{}'", s));
}

FsaNutrient parse_fsa_nutrient(std::string_view s) {
  for (std::size_t i = 0; i < kFsaNutrientCount; ++i) {
    auto n = static_cast<FsaNutrient>(i);
    if (to_string(n) == s) return n;
  }
  throw ConfigError(fmt::format("unknown FSA nutrient '{}'", s));
}

FsaBandBounds extend_with_very_high(TrafficLightBounds t) {
  return {t.low_max, t.medium_max, t.medium_max * kVeryHighFactor};
}

const std::array<TrafficLightBounds, kFsaNutrientCount>& traffic_light_bounds() {
  static const std::array<TrafficLightBounds, kFsaNutrientCount> kBounds{{
      {3.0, 17.5},  // total fat
      {1.5, 5.0},   // saturated fat
      {5.0, 22.5},  // sugars
      {0.3, 1.5},   // salt
  }};
  return kBounds;
}

const FsaConfig& default_fsa_config() {
  static const FsaConfig cfg = [] {
    FsaConfig c;
    const auto& tl = traffic_light_bounds();
    for (std::size_t i = 0; i < kFsaNutrientCount; ++i) c.bounds[i] = extend_with_very_high(tl[i]);
    c.epochs = {
        {4, 7, FsaColor::Green},
        {8, 11, FsaColor::Amber},
        {12, 14, FsaColor::Red},
        {15, 16, FsaColor::Brown},
    };
    return c;
  }();
  return cfg;
}

void validate_epochs(const std::vector<FsaEpoch>& epochs) {
  std::vector<FsaEpoch> sorted = epochs;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.min_score < b.min_score; });
  int next = 4;
  for (const auto& e : sorted) {
    if (e.min_score > e.max_score) throw ConfigError("FSA epoch has min above max");
    if (e.min_score != next) {
      throw ConfigError(fmt::format("FSA epochs leave a gap or overlap at score {}", next));
    }
    next = e.max_score + 1;
  }
  if (next != 17) throw ConfigError("FSA epochs must end at score 16");
}

FsaBand fsa_band(FsaNutrient nutrient, double value, const FsaConfig& cfg) {
  if (value < 0.0) {
    throw ValidationError(std::string(to_string(nutrient)), "FSA nutrient value must be non-negative");
  }
  const FsaBandBounds& b = cfg.bounds[static_cast<std::size_t>(nutrient)];
  if (value <= b.low_max) return {FsaLevel::Low, FsaColor::Green};
  if (value <= b.medium_max) return {FsaLevel::Medium, FsaColor::Amber};
  if (value <= b.high_max) return {FsaLevel::High, FsaColor::Red};
  return {FsaLevel::VeryHigh, FsaColor::Brown};
}

FsaColor color_for_score(int score, const FsaConfig& cfg) {
  for (const auto& e : cfg.epochs) {
    if (score >= e.min_score && score <= e.max_score) return e.color;
  }
  throw ConfigError(fmt::format("no FSA epoch covers score {}", score));
}

int fibre_score(const Recipe& recipe, const FsaConfig& cfg) {
  return per_100g(recipe).fiber_g >= cfg.fibre_threshold_g_per_100g ? 1 : 0;
}

FsaHealthScore fsa_health_score(const Recipe& recipe, const FsaConfig& cfg) {
  const NutrientProfile p = per_100g(recipe);
  FsaHealthScore out;
  out.bands[0] = fsa_band(FsaNutrient::TotalFat, p.total_fat_g, cfg);
  out.bands[1] = fsa_band(FsaNutrient::SaturatedFat, p.saturated_fat_g, cfg);
  out.bands[2] = fsa_band(FsaNutrient::Sugar, p.sugar_g, cfg);
  out.bands[3] = fsa_band(FsaNutrient::Salt, salt_g_from_sodium_mg(p.sodium_mg), cfg);
  out.score = 0;
  for (const auto& b : out.bands) out.score += b.value();
  out.color_code = color_for_score(out.score, cfg);
  out.fibre_score = p.fiber_g >= cfg.fibre_threshold_g_per_100g ? 1 : 0;
  return out;
}

}  // namespace nudge
