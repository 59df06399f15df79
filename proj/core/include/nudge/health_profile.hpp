#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace nudge {

enum class Gender { Male, Female, Other };
enum class Activity { Sedentary, ModeratelyActive, VeryActive, IntenselyActive };
enum class RiskClass { Underweight, NormalWeight, Overweight, ObeseModerate, ObeseSevere, ObeseVerySevere };

std::string_view to_string(Gender g);
std::string_view to_string(Activity a);
std::string_view to_string(RiskClass c);
Gender parse_gender(std::string_view s);
Activity parse_activity(std::string_view s);

struct UserHealthInput {
  double age_years = 0.0;
  double weight_kg = 0.0;
  double height_m = 0.0;
  Gender gender = Gender::Other;
  Activity activity = Activity::Sedentary;
  int meals_per_day = 3;
};

struct HealthProfile {
  double bmr_kcal = 0.0;
  double dci_kcal = 0.0;
  double bmi = 0.0;
  RiskClass risk_class = RiskClass::NormalWeight;
  double energy_adjustment_kcal = 0.0;
  double drci_kcal = 0.0;
  // True when dci + adjustment fell below the floor and was clamped up.
  bool floor_applied = false;
};

inline constexpr double kPoundsPerKg = 2.20462;
inline constexpr double kKcalPerPoundAdjustment = 10.0;
inline constexpr double kDrciFloorKcal = 1000.0;
inline constexpr double kDrciFloorBmrFraction = 0.8;

/// Throws ValidationError (with the field name) or OutOfModelError for age < 10.
void validate(const UserHealthInput& input);

/// Basal metabolic rate, kcal/day, from the WHO weight/height/age-band
/// coefficients (height in metres). Age bands are [10,18) [18,30) [30,60)
/// [60,inf). Gender::Other averages the male and female equations.
double bmr(const UserHealthInput& input);

double activity_coefficient(Gender gender, Activity activity);

/// bmr_kcal scaled by the activity coefficient.
double dci(double bmr_kcal, Gender gender, Activity activity);

double bmi(double weight_kg, double height_m);

/// Class lower bounds are closed: 18.5, 25, 30, 35, 40.
RiskClass risk_class(double bmi_value);

/// Signed kcal/day: +10 kcal per pound for Underweight, -10 kcal per pound for
/// the overweight and obese classes, 0 otherwise.
double energy_adjustment(double weight_kg, RiskClass cls);

double drci_floor(double bmr_kcal);

/// Full pipeline. drci = max(dci + adjustment, drci_floor(bmr)).
HealthProfile drci(const UserHealthInput& input);

/// Reads {age_years, weight_kg, height_m, gender, activity, meals_per_day}.
/// meals_per_day defaults to 3. Throws ValidationError naming the field.
UserHealthInput health_input_from_json(const nlohmann::json& j);
nlohmann::json to_json(const UserHealthInput& input);
nlohmann::json to_json(const HealthProfile& profile);

}  // namespace nudge
