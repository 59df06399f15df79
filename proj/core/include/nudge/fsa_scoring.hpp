#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "nudge/corpus.hpp"

namespace nudge {

enum class FsaNutrient : std::size_t { TotalFat = 0, SaturatedFat, Sugar, Salt };
inline constexpr std::size_t kFsaNutrientCount = 4;

enum class FsaLevel { Low = 1, Medium = 2, High = 3, VeryHigh = 4 };
enum class FsaColor { Green, Amber, Red, Brown };

std::string_view to_string(FsaNutrient n);
std::string_view to_string(FsaLevel l);
std::string_view to_string(FsaColor c);
FsaColor parse_fsa_color(std::string_view s);
FsaNutrient parse_fsa_nutrient(std::string_view s);

struct FsaBand {
  FsaLevel level = FsaLevel::Low;
  FsaColor color = FsaColor::Green;
  int value() const { return static_cast<int>(level); }
  bool operator==(const FsaBand&) const = default;
};

/// Upper bounds (inclusive) of LOW, MEDIUM and HIGH, grams per 100 g.
/// Anything above `high_max` is VERY_HIGH.
struct FsaBandBounds {
  double low_max;
  double medium_max;
  double high_max;
};

/// Multiplier that places the VERY_HIGH lower bound relative to the
/// traffic-light HIGH lower bound.
inline constexpr double kVeryHighFactor = 1.5;

struct FsaEpoch {
  int min_score;  // inclusive
  int max_score;  // inclusive
  FsaColor color;
};

struct FsaConfig {
  std::array<FsaBandBounds, kFsaNutrientCount> bounds;
  std::vector<FsaEpoch> epochs;
  double fibre_threshold_g_per_100g = 3.0;
};

/// Three-band traffic-light bounds for one nutrient: LOW max and MEDIUM max.
struct TrafficLightBounds {
  double low_max;
  double medium_max;
};

/// Extends traffic-light bounds with a fourth band starting at
/// medium_max * kVeryHighFactor.
FsaBandBounds extend_with_very_high(TrafficLightBounds traffic_light);

const std::array<TrafficLightBounds, kFsaNutrientCount>& traffic_light_bounds();
const FsaConfig& default_fsa_config();

/// Throws ConfigError unless the epochs cover 4..16 without gaps or overlaps.
void validate_epochs(const std::vector<FsaEpoch>& epochs);

/// Throws ValidationError for negative values.
FsaBand fsa_band(FsaNutrient nutrient, double grams_per_100g, const FsaConfig& cfg = default_fsa_config());

FsaColor color_for_score(int score, const FsaConfig& cfg = default_fsa_config());

struct FsaHealthScore {
  int score = 4;  // 4..16
  int fibre_score = 0;
  FsaColor color_code = FsaColor::Green;
  std::array<FsaBand, kFsaNutrientCount> bands{};
};

int fibre_score(const Recipe& recipe, const FsaConfig& cfg = default_fsa_config());
FsaHealthScore fsa_health_score(const Recipe& recipe, const FsaConfig& cfg = default_fsa_config());

}  // namespace nudge
