#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace nudge {

/// The eight scored nutrient quantities. The basis (per portion or per 100 g)
/// is carried by context, never mixed within one value.
struct NutrientProfile {
  double protein_g = 0.0;
  double carbohydrate_g = 0.0;
  double sugar_g = 0.0;
  double sodium_mg = 0.0;
  double total_fat_g = 0.0;
  double saturated_fat_g = 0.0;
  double fiber_g = 0.0;
  double cholesterol_mg = 0.0;

  NutrientProfile scaled(double factor) const;
  bool operator==(const NutrientProfile&) const = default;
};

struct Recipe {
  std::string id;
  std::string title;
  std::string instructions;
  std::string image_ref;
  std::set<std::string> feature_tags;
  double serving_weight_g = 0.0;
  double calories_per_portion = 0.0;
  NutrientProfile per_portion;
  std::vector<std::string> dish_annotations;
};

/// Percent of total macro energy (0-100) carried by each macro group.
struct MacroEnergyShares {
  double protein_pct = 0.0;
  double carbohydrate_pct = 0.0;
  double sugar_pct = 0.0;
  double total_fat_pct = 0.0;
  double saturated_fat_pct = 0.0;
  double total_kcal = 0.0;
};

namespace atwater {
inline constexpr double kProteinKcalPerG = 4.0;
inline constexpr double kCarbohydrateKcalPerG = 4.0;
inline constexpr double kFatKcalPerG = 9.0;
}  // namespace atwater

struct RejectedRecord {
  std::size_t line = 0;  // 1-based
  std::string id;        // empty when the record had no readable id
  std::string reason;
};

struct CorpusLoadResult {
  std::vector<Recipe> recipes;
  std::vector<RejectedRecord> rejected;
};

/// Returns the first invariant the recipe violates, or nullopt when valid.
std::optional<std::string> validate_recipe(const Recipe& recipe);

/// Parses one corpus record. Throws ValidationError naming the missing or
/// mistyped field; invariant checks are left to validate_recipe.
Recipe recipe_from_json(const nlohmann::json& record);
nlohmann::json recipe_to_json(const Recipe& recipe);

/// Reads line-delimited JSON records. Blank lines are skipped; every other
/// line either becomes a Recipe or a RejectedRecord.
CorpusLoadResult parse_corpus(std::istream& in);

/// Throws LoadError when the file cannot be opened.
CorpusLoadResult load_corpus(const std::filesystem::path& path);

void write_corpus(std::ostream& out, const std::vector<Recipe>& recipes);

NutrientProfile per_100g(const Recipe& recipe);

/// Inverse of per_100g for a given portion mass.
NutrientProfile to_portion(const NutrientProfile& per100, double serving_weight_g);

/// Atwater 4/4/9 shares. Throws ScoringError("zero-energy profile") when
/// protein, carbohydrate and fat are all zero.
MacroEnergyShares energy_shares(const NutrientProfile& profile);

/// Salt grams implied by a sodium quantity in milligrams.
inline double salt_g_from_sodium_mg(double sodium_mg) { return sodium_mg * 2.5 / 1000.0; }

}  // namespace nudge
