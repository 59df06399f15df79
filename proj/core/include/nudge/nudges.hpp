#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nudge/health_profile.hpp"
#include "nudge/portion.hpp"
#include "nudge/recommender.hpp"

namespace nudge {

enum class ScenarioKind { DrciMlcp = 0, WhoBubbleSlider, FsaColorCoding, NoNudge };
inline constexpr std::size_t kScenarioCount = 4;
inline constexpr std::array<ScenarioKind, kScenarioCount> kAllScenarios{
    ScenarioKind::DrciMlcp, ScenarioKind::WhoBubbleSlider, ScenarioKind::FsaColorCoding, ScenarioKind::NoNudge};

std::string_view to_string(ScenarioKind k);
/// Accepts the kind name ("WHO_BUBBLESLIDER").
ScenarioKind parse_scenario(std::string_view s);
bool is_nudged(ScenarioKind k);

/// Bijection between the neutral list names shown to participants and the
/// scenario behind each list.
class PseudoNames {
 public:
  /// Aqua, Mint, Kiwi, Berry -> DRCI_MLCP, WHO, FSA, NO_NUDGE.
  PseudoNames();
  /// Throws ConfigError unless `names` holds four distinct non-empty names.
  explicit PseudoNames(std::array<std::string, kScenarioCount> names_by_kind);

  const std::string& name_of(ScenarioKind k) const { return names_[static_cast<std::size_t>(k)]; }
  /// Resolves either a pseudo name or a kind name; nullopt when neither.
  std::optional<ScenarioKind> resolve(std::string_view name) const;

 private:
  std::array<std::string, kScenarioCount> names_;
};

using FieldValue = std::variant<double, bool, std::string>;

struct WidgetField {
  std::string name;
  FieldValue value;
};

struct WidgetSection {
  std::string role;
  std::string text;
  std::vector<WidgetField> fields;
};

struct WidgetPayload {
  ScenarioKind scenario = ScenarioKind::NoNudge;
  std::vector<WidgetSection> sections;
  std::string source_note;
};

enum class BadgeKind { Calorie, WhoScore, FsaColor, None };
std::string_view to_string(BadgeKind k);

struct BadgePayload {
  BadgeKind kind = BadgeKind::None;
  std::variant<std::monostate, int, std::string> value;
};

/// Throws ContractError when `portion` was not computed for `rec` or exceeds
/// the profile's DRCI.
WidgetPayload build_widget(ScenarioKind scenario, const HealthProfile& profile, const ScoredRecipe& rec,
                           const PortionRecommendation& portion, const FsaConfig& fsa = default_fsa_config());

BadgePayload build_badge(ScenarioKind scenario, const ScoredRecipe& rec);

/// Rounds to the two decimals shown in payloads.
double round_portions(double portions);

nlohmann::json to_json(const WidgetPayload& w);
nlohmann::json to_json(const BadgePayload& b);

}  // namespace nudge
