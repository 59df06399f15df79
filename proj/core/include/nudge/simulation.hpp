#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nudge/metrics.hpp"
#include "nudge/recommender.hpp"
#include "nudge/study.hpp"

namespace nudge {

struct SyntheticCorpusOptions {
  std::size_t recipes = 600;
  std::uint64_t seed = 7;
  std::size_t vocabulary = 60;
  std::size_t min_tags = 6;
  std::size_t max_tags = 12;
};

struct SyntheticCorpus {
  std::vector<Recipe> recipes;
  AssociationMatrix associations;
  std::vector<std::string> vocabulary;  // feature tags
  std::vector<std::string> dishes;      // title words usable as queries
};

/// Random recipes whose nutrients are drawn independently of their tags and
/// topics, so taste carries no health signal of its own.
SyntheticCorpus generate_corpus(const SyntheticCorpusOptions& options = {});

/// Random feature vocabulary ("feature-07", ...) of the given size.
std::vector<std::string> feature_vocabulary(std::size_t size);

struct SimulationOptions {
  std::size_t participants = 720;
  std::uint64_t seed = 11;
  // Weight of the WHO score in the rating blend under nudged scenarios.
  double nudge_weight = 0.7;
  // Same weight under NO_NUDGE.
  double no_nudge_weight = 0.0;
  double noise_sd = 0.05;
};

struct SimulationResult {
  MetricReport report;
  std::vector<SessionEvent> events;
  std::size_t participants = 0;
  std::size_t completed = 0;
  std::size_t rejected_requests = 0;
  double seconds = 0.0;
};

/// Signs simulated participants up through an in-process Service and walks
/// each one through four scenarios: query, browse, click, rate all seven,
/// pin one, then the questionnaire. Ratings blend a min-max normalised taste
/// score with who_score / 8 plus Gaussian noise, mapped onto 0..5.
SimulationResult run_simulation(const Catalog& catalog, const std::vector<std::string>& vocabulary,
                                const std::vector<std::string>& queries, const SimulationOptions& options = {});

enum class RaterMode { Perfect, Anti, Random };
std::string_view to_string(RaterMode m);
RaterMode parse_rater_mode(std::string_view s);

struct RaterLogOptions {
  std::size_t sessions = 600;
  std::size_t list_size = 5;
  std::uint64_t seed = 3;
  RaterMode mode = RaterMode::Random;
};

/// Log of rate/click/pin events over lists drawn from `health`. Perfect and
/// Anti raters order recipes exactly with or against their WHO score; their
/// lists use distinct WHO scores so user and system ranks mirror each other.
/// Throws ValidationError when the index cannot supply such lists.
std::vector<SessionEvent> synthetic_rater_log(const HealthIndex& health, const RaterLogOptions& options);

}  // namespace nudge
