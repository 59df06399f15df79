#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nudge/nudges.hpp"
#include "nudge/recommender.hpp"
#include "nudge/study.hpp"

namespace nudge {

enum class RankBasis { SystemWho, SystemFsa, UserRating };
/// How tied items share a position: Ceiling takes the largest position of the
/// tie block, Floor the smallest, Fractional their mean.
enum class TieRule { Ceiling, Floor, Fractional };

std::string_view to_string(RankBasis b);
std::string_view to_string(TieRule t);
TieRule parse_tie_rule(std::string_view s);

struct RankedItem {
  std::string recipe_id;
  double rank = 0.0;
};

/// Items keep the order they were given in; only `rank` reflects sorting.
struct RankedList {
  RankBasis basis = RankBasis::SystemWho;
  std::vector<RankedItem> items;

  std::optional<double> rank_of(std::string_view recipe_id) const;
};

inline constexpr int kHealthyWhoThreshold = 4;

/// Maps a WHO score 0..8 onto 1..5.
double normalized_who(int who_score);
/// Maps an FSA score 4..16 onto 1..5 with 5 the healthiest.
double normalized_fsa(int fsa_score);

/// Ranks items by descending value. Ranks are positions 1..n.
std::vector<double> rank_descending(const std::vector<double>& values, TieRule rule = TieRule::Ceiling);

/// `scores` are WHO scores for SystemWho and FSA scores for SystemFsa.
/// Throws ValidationError for fewer than two items or a UserRating basis.
RankedList system_rank(const std::vector<std::pair<std::string, int>>& scores, RankBasis basis,
                       TieRule rule = TieRule::Ceiling);

/// Throws ValidationError when any recipe in `recipe_ids` lacks a rating.
RankedList user_rank(const std::vector<std::string>& recipe_ids, const std::map<std::string, int>& ratings,
                     TieRule rule = TieRule::Ceiling);

/// A metric that may be undefined; `reason` explains why when it is.
struct MetricValue {
  std::optional<double> value;
  std::string reason;

  bool defined() const { return value.has_value(); }
};

/// Pearson correlation. Undefined for fewer than two pairs or zero variance.
MetricValue ppmcc(const std::vector<double>& x, const std::vector<double>& y);
/// Pools (system rank, user rank) pairs, matched by recipe id, across lists.
MetricValue ppmcc(const std::vector<std::pair<RankedList, RankedList>>& pooled);

struct NdpmCounts {
  std::size_t user_ordered_pairs = 0;  // C_i
  std::size_t contradicted = 0;        // C_minus
  std::size_t system_tied = 0;         // C_u0
};

NdpmCounts ndpm_counts(const RankedList& system, const RankedList& user);
/// (2 C_minus + C_u0) / (2 C_i). Undefined when the user ties every pair.
MetricValue ndpm(const RankedList& system, const RankedList& user);

struct RecipeHealth {
  int who_score = 0;
  int fsa_score = 4;
};

using HealthIndex = std::map<std::string, RecipeHealth, std::less<>>;

HealthIndex health_index(const Catalog& catalog);

struct RateMetric {
  MetricValue value;
  std::size_t included = 0;
  std::size_t excluded = 0;  // sessions without a click/pin or with an unknown recipe
};

/// Fraction of sessions whose first click is on a recipe with WHO >= threshold.
RateMetric cfcr(const std::vector<SessionRecord>& sessions, const HealthIndex& health,
                int healthy_threshold = kHealthyWhoThreshold);
/// Fraction of pins on recipes with WHO >= threshold.
RateMetric chitr(const std::vector<SessionRecord>& sessions, const HealthIndex& health,
                 int healthy_threshold = kHealthyWhoThreshold);

struct ScatterPoint {
  std::string participant_number;
  std::string recipe_id;
  int who_score = 0;
  int fsa_score = 4;
  int rating = 0;
  double system_rank_who = 0.0;
  double system_rank_fsa = 0.0;
  double user_rank = 0.0;
};

struct ScenarioMetrics {
  ScenarioKind scenario = ScenarioKind::NoNudge;
  std::size_t sessions = 0;
  std::size_t ranked_sessions = 0;
  // Sessions with unrated or unknown recipes, or fewer than two recipes.
  std::size_t unranked_sessions = 0;
  MetricValue ppmcc_who;
  MetricValue ppmcc_fsa;
  MetricValue ndpm_who;
  MetricValue ndpm_fsa;
  std::size_t ndpm_undefined_sessions = 0;
  RateMetric cfcr;
  RateMetric chitr;
  std::vector<ScatterPoint> scatter;
};

struct MetricOptions {
  TieRule tie_rule = TieRule::Ceiling;
  int healthy_threshold = kHealthyWhoThreshold;
};

struct MetricReport {
  MetricOptions options;
  std::vector<ScenarioMetrics> scenarios;  // one per scenario kind, fixed order
  std::size_t malformed_lines = 0;

  const ScenarioMetrics& at(ScenarioKind k) const;
};

/// NDPM is averaged over sessions; PPMCC pools all pairs of a scenario.
MetricReport compute_report(const std::vector<SessionRecord>& sessions, const HealthIndex& health,
                            const MetricOptions& options = {});

nlohmann::json to_json(const MetricValue& m);
nlohmann::json to_json(const MetricReport& r);
/// Plain-text summary table, one row per scenario.
std::string format_report_table(const MetricReport& r);
/// One CSV row per rated recipe: scenario, participant, recipe, scores, ranks.
void write_scatter_csv(std::ostream& out, const MetricReport& r);

}  // namespace nudge
