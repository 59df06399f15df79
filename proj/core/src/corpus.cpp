#include "nudge/corpus.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>

#include "nudge/error.hpp"

namespace nudge {

using nlohmann::json;

NutrientProfile NutrientProfile::scaled(double factor) const {
  return {protein_g * factor,      carbohydrate_g * factor, sugar_g * factor,
          sodium_mg * factor,      total_fat_g * factor,    saturated_fat_g * factor,
          fiber_g * factor,        cholesterol_mg * factor};
}

namespace {

const json& require(const json& record, const char* field) {
  auto it = record.find(field);
  if (it == record.end() || it->is_null()) {
    throw ValidationError(field, fmt::format("missing required field: {}", field));
  }
  return *it;
}

std::string require_string(const json& record, const char* field) {
  const json& v = require(record, field);
  if (!v.is_string()) throw ValidationError(field, fmt::format("field {} must be a string", field));
  return v.get<std::string>();
}

double require_number(const json& record, const char* field) {
  const json& v = require(record, field);
  if (!v.is_number()) throw ValidationError(field, fmt::format("field {} must be a number", field));
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(field, fmt::format("field {} must be finite", field));
  return d;
}

std::vector<std::string> string_array(const json& v, const char* field) {
  if (!v.is_array()) throw ValidationError(field, fmt::format("field {} must be an array", field));
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_string()) {
      throw ValidationError(field, fmt::format("field {} must contain only strings", field));
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

std::optional<std::string> validate_recipe(const Recipe& r) {
  if (r.id.empty()) return "empty id";
  if (!(r.serving_weight_g > 0.0)) return "non-positive serving weight";
  if (r.calories_per_portion < 0.0) return "negative calories";
  const NutrientProfile& n = r.per_portion;
  const std::pair<const char*, double> fields[] = {
      {"protein_g", n.protein_g},       {"carbohydrate_g", n.carbohydrate_g},
      {"sugar_g", n.sugar_g},           {"sodium_mg", n.sodium_mg},
      {"total_fat_g", n.total_fat_g},   {"saturated_fat_g", n.saturated_fat_g},
      {"fiber_g", n.fiber_g},           {"cholesterol_mg", n.cholesterol_mg},
  };
  for (const auto& [name, value] : fields) {
    if (value < 0.0) return fmt::format("negative nutrient: {}", name);
  }
  if (n.sugar_g > n.carbohydrate_g) return "sugar exceeds carbohydrate";
  if (n.saturated_fat_g > n.total_fat_g) return "saturated fat exceeds total fat";
  return std::nullopt;
}

Recipe recipe_from_json(const json& record) {
  if (!record.is_object()) throw ValidationError("record must be an object");
  Recipe r;
  r.id = require_string(record, "id");
  r.title = require_string(record, "title");
  r.instructions = require_string(record, "instructions");
  r.image_ref = require_string(record, "image_ref");
  for (auto& tag : string_array(require(record, "feature_tags"), "feature_tags")) {
    r.feature_tags.insert(std::move(tag));
  }
  r.serving_weight_g = require_number(record, "serving_weight_g");
  r.calories_per_portion = require_number(record, "calories_per_portion");
  r.per_portion.protein_g = require_number(record, "protein_g");
  r.per_portion.carbohydrate_g = require_number(record, "carbohydrate_g");
  r.per_portion.sugar_g = require_number(record, "sugar_g");
  r.per_portion.sodium_mg = require_number(record, "sodium_mg");
  r.per_portion.total_fat_g = require_number(record, "total_fat_g");
  r.per_portion.saturated_fat_g = require_number(record, "saturated_fat_g");
  r.per_portion.fiber_g = require_number(record, "fiber_g");
  r.per_portion.cholesterol_mg = require_number(record, "cholesterol_mg");
  if (auto it = record.find("dish_annotations"); it != record.end() && !it->is_null()) {
    r.dish_annotations = string_array(*it, "dish_annotations");
  }
  return r;
}

json recipe_to_json(const Recipe& r) {
  json j = {
      {"id", r.id},
      {"title", r.title},
      {"instructions", r.instructions},
      {"image_ref", r.image_ref},
      {"feature_tags", r.feature_tags},
      {"serving_weight_g", r.serving_weight_g},
      {"calories_per_portion", r.calories_per_portion},
      {"protein_g", r.per_portion.protein_g},
      {"carbohydrate_g", r.per_portion.carbohydrate_g},
      {"sugar_g", r.per_portion.sugar_g},
      {"sodium_mg", r.per_portion.sodium_mg},
      {"total_fat_g", r.per_portion.total_fat_g},
      {"saturated_fat_g", r.per_portion.saturated_fat_g},
      {"fiber_g", r.per_portion.fiber_g},
      {"cholesterol_mg", r.per_portion.cholesterol_mg},
  };
  if (!r.dish_annotations.empty()) j["dish_annotations"] = r.dish_annotations;
  return j;
}

CorpusLoadResult parse_corpus(std::istream& in) {
  CorpusLoadResult result;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded()) {
      result.rejected.push_back({line_no, "", "malformed record"});
      continue;
    }
    std::string id;
    if (record.is_object()) {
      if (auto it = record.find("id"); it != record.end() && it->is_string()) id = it->get<std::string>();
    }
    try {
      Recipe recipe = recipe_from_json(record);
      if (auto reason = validate_recipe(recipe)) {
        result.rejected.push_back({line_no, id, *reason});
        continue;
      }
      if (!seen.insert(recipe.id).second) {
        result.rejected.push_back({line_no, id, "duplicate id"});
        continue;
      }
      result.recipes.push_back(std::move(recipe));
    } catch (const ValidationError& e) {
      result.rejected.push_back({line_no, id, e.what()});
    }
  }
  return result;
}

CorpusLoadResult load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(fmt::format("cannot open corpus file: {}", path.string()));
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, const std::vector<Recipe>& recipes) {
  for (const auto& r : recipes) out << recipe_to_json(r).dump() << '\n';
}

NutrientProfile per_100g(const Recipe& recipe) {
  return recipe.per_portion.scaled(100.0 / recipe.serving_weight_g);
}

NutrientProfile to_portion(const NutrientProfile& per100, double serving_weight_g) {
  return per100.scaled(serving_weight_g / 100.0);
}

MacroEnergyShares energy_shares(const NutrientProfile& p) {
  const double protein_kcal = atwater::kProteinKcalPerG * p.protein_g;
  const double carb_kcal = atwater::kCarbohydrateKcalPerG * p.carbohydrate_g;
  const double fat_kcal = atwater::kFatKcalPerG * p.total_fat_g;
  const double total = protein_kcal + carb_kcal + fat_kcal;
  if (!(total > 0.0)) throw ScoringError("zero-energy profile");

  MacroEnergyShares s;
  s.total_kcal = total;
  s.protein_pct = 100.0 * protein_kcal / total;
  s.carbohydrate_pct = 100.0 * carb_kcal / total;
  s.total_fat_pct = 100.0 * fat_kcal / total;
  s.sugar_pct = 100.0 * atwater::kCarbohydrateKcalPerG * p.sugar_g / total;
  s.saturated_fat_pct = 100.0 * atwater::kFatKcalPerG * p.saturated_fat_g / total;
  return s;
}

}  // namespace nudge
