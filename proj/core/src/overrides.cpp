#include "nudge/overrides.hpp"

#include <fstream>

#include <fmt/format.h>

#include "nudge/error.hpp"

namespace nudge {

namespace {

double number(const nlohmann::json& j, std::string_view where) {
  if (!j.is_number()) throw ConfigError(fmt::format("{} must be a number", where));
  return j.get<double>();
}

PercentRange range(const nlohmann::json& j, std::string_view where) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(fmt::format("{} must be [min, max]", where));
  PercentRange r{number(j[0], where), number(j[1], where)};
  if (!(r.min_pct >= 0.0 && r.min_pct <= r.max_pct && r.max_pct <= 100.0)) {
    throw ConfigError(fmt::format("{} must satisfy 0 <= min <= max <= 100", where));
  }
  return r;
}

double positive(const nlohmann::json& j, std::string_view where) {
  double v = number(j, where);
  if (!(v > 0.0)) throw ConfigError(fmt::format("{} must be positive", where));
  return v;
}

void apply_who(const nlohmann::json& j, WhoGoals& g) {
  for (const auto& [key, v] : j.items()) {
    auto where = "who." + key;
    if (key == "total_fat") g.total_fat = range(v, where);
    else if (key == "carbohydrate") g.carbohydrate = range(v, where);
    else if (key == "protein") g.protein = range(v, where);
    else if (key == "saturated_fat_below_pct") g.saturated_fat_below_pct = positive(v, where);
    else if (key == "sugar_below_pct") g.sugar_below_pct = positive(v, where);
    else if (key == "salt_below_g_per_day") g.salt_below_g_per_day = positive(v, where);
    else if (key == "cholesterol_below_mg_per_day") g.cholesterol_below_mg_per_day = positive(v, where);
    else if (key == "fiber_above_g_per_day") g.fiber_above_g_per_day = positive(v, where);
    else if (key == "reference_day_kcal") g.reference_day_kcal = positive(v, where);
    else throw ConfigError(fmt::format("unknown override key '{}'", where));
  }
}

void apply_fsa(const nlohmann::json& j, FsaConfig& cfg) {
  for (const auto& [key, v] : j.items()) {
    if (key == "bounds") {
      if (!v.is_object()) throw ConfigError("fsa.bounds must be an object");
      for (const auto& [name, b] : v.items()) {
        auto where = "fsa.bounds." + name;
        FsaNutrient n;
        try {
          n = parse_fsa_nutrient(name);
        } catch (const Error&) {
          throw ConfigError(fmt::format("unknown FSA nutrient '{}'", name));
        }
        if (!b.is_array() || b.size() != 3) throw ConfigError(fmt::format("{} must be [low, medium, high]", where));
        FsaBandBounds bounds{number(b[0], where), number(b[1], where), number(b[2], where)};
        if (!(bounds.low_max > 0.0 && bounds.low_max < bounds.medium_max && bounds.medium_max < bounds.high_max)) {
          throw ConfigError(fmt::format("{} must be positive and strictly increasing", where));
        }
        cfg.bounds[static_cast<std::size_t>(n)] = bounds;
      }
    } else if (key == "epochs") {
      if (!v.is_array()) throw ConfigError("fsa.epochs must be an array");
      std::vector<FsaEpoch> epochs;
      for (const auto& e : v) {
        try {
          epochs.push_back({e.at("min").get<int>(), e.at("max").get<int>(),
                            parse_fsa_color(e.at("color").get<std::string>())});
        } catch (const nlohmann::json::exception&) {
          throw ConfigError("each fsa epoch needs integer min, max and a color");
        } catch (const ValidationError& err) {
          throw ConfigError(err.what());
        }
      }
      validate_epochs(epochs);
      cfg.epochs = std::move(epochs);
    } else if (key == "fibre_threshold") {
      cfg.fibre_threshold_g_per_100g = positive(v, "fsa.fibre_threshold");
    } else {
      throw ConfigError(fmt::format("unknown override key 'fsa.{}'", key));
    }
  }
}

void apply_shares(const nlohmann::json& j, CalorieShareTable& shares) {
  if (!j.is_array()) throw ConfigError("share_table must be an array");
  for (const auto& row : j) {
    try {
      shares.set(row.at("meals_per_day").get<int>(), parse_food_type(row.at("food_type").get<std::string>()),
                 row.at("percent").get<double>());
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("share_table rows need meals_per_day, food_type and percent");
    } catch (const ValidationError& err) {
      throw ConfigError(err.what());
    }
  }
}

}  // namespace

void apply_overrides(const nlohmann::json& doc, EngineConfig& config) {
  if (!doc.is_object()) throw ConfigError("override document must be an object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "who") {
      if (!v.is_object()) throw ConfigError("who must be an object");
      apply_who(v, config.who);
    } else if (key == "fsa") {
      if (!v.is_object()) throw ConfigError("fsa must be an object");
      apply_fsa(v, config.fsa);
    } else if (key == "share_table") {
      apply_shares(v, config.shares);
    } else {
      throw ConfigError(fmt::format("unknown override key '{}'", key));
    }
  }
}

EngineConfig load_overrides(const std::filesystem::path& path, EngineConfig base) {
  std::ifstream in(path);
  if (!in) throw LoadError(fmt::format("cannot open override file '{}'", path.string()));
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("override file '{}' is not valid JSON: {}", path.string(), e.what()));
  }
  apply_overrides(doc, base);
  return base;
}

nlohmann::json to_json(const EngineConfig& c) {
  nlohmann::json bounds = nlohmann::json::object();
  for (std::size_t i = 0; i < kFsaNutrientCount; ++i) {
    const auto& b = c.fsa.bounds[i];
    bounds[std::string(to_string(static_cast<FsaNutrient>(i)))] = {b.low_max, b.medium_max, b.high_max};
  }
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& e : c.fsa.epochs) {
    epochs.push_back({{"min", e.min_score}, {"max", e.max_score}, {"color", to_string(e.color)}});
  }
  nlohmann::json shares = nlohmann::json::array();
  for (const auto& [key, pct] : c.shares.cells()) {
    shares.push_back({{"meals_per_day", key.first}, {"food_type", to_string(key.second)}, {"percent", pct}});
  }
  const auto& w = c.who;
  return {{"who",
           {{"total_fat", {w.total_fat.min_pct, w.total_fat.max_pct}},
            {"carbohydrate", {w.carbohydrate.min_pct, w.carbohydrate.max_pct}},
            {"protein", {w.protein.min_pct, w.protein.max_pct}},
            {"saturated_fat_below_pct", w.saturated_fat_below_pct},
            {"sugar_below_pct", w.sugar_below_pct},
            {"salt_below_g_per_day", w.salt_below_g_per_day},
            {"cholesterol_below_mg_per_day", w.cholesterol_below_mg_per_day},
            {"fiber_above_g_per_day", w.fiber_above_g_per_day},
            {"reference_day_kcal", w.reference_day_kcal}}},
          {"fsa", {{"bounds", bounds}, {"epochs", epochs}, {"fibre_threshold", c.fsa.fibre_threshold_g_per_100g}}},
          {"share_table", shares}};
}

}  // namespace nudge
