#include "nudge/health_profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "nudge/error.hpp"

namespace nudge {

namespace {

struct BmrRow {
  double min_age;
  double weight_coef;
  double height_coef;
  double constant;
};

// WHO Technical Report Series 724, height in metres. The 60+ male height
// coefficient is 1128.
constexpr std::array<BmrRow, 4> kMaleRows{{
    {10.0, 16.6, 77.0, 572.0},
    {18.0, 15.4, -27.0, 717.0},
    {30.0, 11.3, 16.0, 901.0},
    {60.0, 8.8, 1128.0, -1071.0},
}};
constexpr std::array<BmrRow, 4> kFemaleRows{{
    {10.0, 7.4, 482.0, 217.0},
    {18.0, 13.3, 334.0, 35.0},
    {30.0, 8.7, -25.0, 865.0},
    {60.0, 9.2, 637.0, -302.0},
}};

double evaluate(const std::array<BmrRow, 4>& rows, const UserHealthInput& in) {
  const BmrRow* row = &rows.front();
  for (const auto& r : rows) {
    if (in.age_years >= r.min_age) row = &r;
  }
  return row->weight_coef * in.weight_kg + row->height_coef * in.height_m + row->constant;
}

struct ActivityRow {
  double male;
  double female;
};

// NRC daily energy allowance factors, indexed by Activity.
constexpr std::array<ActivityRow, 4> kActivity{{
    {1.3, 1.3},
    {1.7, 1.6},
    {2.1, 2.9},
    {2.4, 2.2},
}};

}  // namespace

std::string_view to_string(Gender g) {
  switch (g) {
    case Gender::Male: return "male";
    case Gender::Female: return "female";
    case Gender::Other: return "other";
  }
  return "other";
}

std::string_view to_string(Activity a) {
  switch (a) {
    case Activity::Sedentary: return "sedentary";
    case Activity::ModeratelyActive: return "moderately_active";
    case Activity::VeryActive: return "very_active";
    case Activity::IntenselyActive: return "intensely_active";
  }
  return "sedentary";
}

std::string_view to_string(RiskClass c) {
  switch (c) {
    case RiskClass::Underweight: return "Underweight";
    case RiskClass::NormalWeight: return "NormalWeight";
    case RiskClass::Overweight: return "Overweight";
    case RiskClass::ObeseModerate: return "ObeseModerate";
    case RiskClass::ObeseSevere: return "ObeseSevere";
    case RiskClass::ObeseVerySevere: return "ObeseVerySevere";
  }
  return "NormalWeight";
}

Gender parse_gender(std::string_view s) {
  if (s == "male") return Gender::Male;
  if (s == "female") return Gender::Female;
  if (s == "other") return Gender::Other;
  throw ValidationError("gender", fmt::format("unknown gender '{}'", s));
}

Activity parse_activity(std::string_view s) {
  if (s == "sedentary") return Activity::Sedentary;
  if (s == "moderately_active") return Activity::ModeratelyActive;
  if (s == "very_active") return Activity::VeryActive;
  if (s == "intensely_active") return Activity::IntenselyActive;
  throw ValidationError("activity", fmt::format("unknown activity level '{}'", s));
}

void validate(const UserHealthInput& in) {
  if (!std::isfinite(in.age_years)) throw ValidationError("age_years", "age_years must be finite");
  if (in.age_years < 10.0) {
    throw OutOfModelError(fmt::format("age {} is below the modelled minimum of 10 years", in.age_years));
  }
  if (!(in.weight_kg > 0.0 && in.weight_kg < 500.0)) {
    throw ValidationError("weight_kg", "weight_kg must be in (0, 500)");
  }
  if (!(in.height_m > 0.5 && in.height_m < 2.5)) {
    throw ValidationError("height_m", "height_m must be in (0.5, 2.5)");
  }
  if (in.meals_per_day != 2 && in.meals_per_day != 3) {
    throw ValidationError("meals_per_day", "meals_per_day must be 2 or 3");
  }
}

double bmr(const UserHealthInput& in) {
  if (in.age_years < 10.0) {
    throw OutOfModelError(fmt::format("age {} is below the modelled minimum of 10 years", in.age_years));
  }
  double value = 0.0;
  switch (in.gender) {
    case Gender::Male: value = evaluate(kMaleRows, in); break;
    case Gender::Female: value = evaluate(kFemaleRows, in); break;
    case Gender::Other: value = 0.5 * (evaluate(kMaleRows, in) + evaluate(kFemaleRows, in)); break;
  }
  if (!(value > 0.0)) {
    throw OutOfModelError(fmt::format("BMR equation gives a non-positive value ({:.2f} kcal)", value));
  }
  return value;
}

double activity_coefficient(Gender gender, Activity activity) {
  const ActivityRow& row = kActivity[static_cast<std::size_t>(activity)];
  switch (gender) {
    case Gender::Male: return row.male;
    case Gender::Female: return row.female;
    case Gender::Other: return 0.5 * (row.male + row.female);
  }
  return row.male;
}

double dci(double bmr_kcal, Gender gender, Activity activity) {
  return bmr_kcal * activity_coefficient(gender, activity);
}

double bmi(double weight_kg, double height_m) { return weight_kg / (height_m * height_m); }

RiskClass risk_class(double v) {
  if (v < 18.5) return RiskClass::Underweight;
  if (v < 25.0) return RiskClass::NormalWeight;
  if (v < 30.0) return RiskClass::Overweight;
  if (v < 35.0) return RiskClass::ObeseModerate;
  if (v < 40.0) return RiskClass::ObeseSevere;
  return RiskClass::ObeseVerySevere;
}

double energy_adjustment(double weight_kg, RiskClass cls) {
  const double magnitude = weight_kg * kPoundsPerKg * kKcalPerPoundAdjustment;
  switch (cls) {
    case RiskClass::Underweight: return magnitude;
    case RiskClass::NormalWeight: return 0.0;
    default: return -magnitude;
  }
}

double drci_floor(double bmr_kcal) {
  return std::max(kDrciFloorKcal, kDrciFloorBmrFraction * bmr_kcal);
}

HealthProfile drci(const UserHealthInput& in) {
  validate(in);
  HealthProfile p;
  p.bmr_kcal = bmr(in);
  p.dci_kcal = dci(p.bmr_kcal, in.gender, in.activity);
  p.bmi = bmi(in.weight_kg, in.height_m);
  p.risk_class = risk_class(p.bmi);
  p.energy_adjustment_kcal = energy_adjustment(in.weight_kg, p.risk_class);
  const double raw = p.dci_kcal + p.energy_adjustment_kcal;
  const double floor = drci_floor(p.bmr_kcal);
  p.floor_applied = raw < floor;
  p.drci_kcal = p.floor_applied ? floor : raw;
  return p;
}

namespace {

double number_field(const nlohmann::json& j, const char* name) {
  if (!j.contains(name)) throw ValidationError(name, fmt::format("missing required field: {}", name));
  const auto& v = j.at(name);
  if (!v.is_number()) throw ValidationError(name, fmt::format("{} must be a number", name));
  return v.get<double>();
}

std::string string_field(const nlohmann::json& j, const char* name) {
  if (!j.contains(name)) throw ValidationError(name, fmt::format("missing required field: {}", name));
  const auto& v = j.at(name);
  if (!v.is_string()) throw ValidationError(name, fmt::format("{} must be a string", name));
  return v.get<std::string>();
}

}  // namespace

UserHealthInput health_input_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("health", "health input must be an object");
  UserHealthInput in;
  in.age_years = number_field(j, "age_years");
  in.weight_kg = number_field(j, "weight_kg");
  in.height_m = number_field(j, "height_m");
  in.gender = parse_gender(string_field(j, "gender"));
  in.activity = parse_activity(string_field(j, "activity"));
  if (j.contains("meals_per_day")) {
    const auto& m = j.at("meals_per_day");
    if (!m.is_number_integer()) throw ValidationError("meals_per_day", "meals_per_day must be an integer");
    in.meals_per_day = m.get<int>();
  }
  return in;
}

nlohmann::json to_json(const UserHealthInput& in) {
  return {{"age_years", in.age_years},     {"weight_kg", in.weight_kg},
          {"height_m", in.height_m},       {"gender", to_string(in.gender)},
          {"activity", to_string(in.activity)}, {"meals_per_day", in.meals_per_day}};
}

nlohmann::json to_json(const HealthProfile& p) {
  return {{"bmr_kcal", p.bmr_kcal},
          {"dci_kcal", p.dci_kcal},
          {"bmi", p.bmi},
          {"risk_class", to_string(p.risk_class)},
          {"energy_adjustment_kcal", p.energy_adjustment_kcal},
          {"drci_kcal", p.drci_kcal},
          {"floor_applied", p.floor_applied}};
}

}  // namespace nudge
