#include <benchmark/benchmark.h>

#include "nudge/fsa_scoring.hpp"
#include "nudge/metrics.hpp"
#include "nudge/recommender.hpp"
#include "nudge/simulation.hpp"
#include "nudge/who_scoring.hpp"

namespace {

const nudge::SyntheticCorpus& corpus() {
  static const auto c = nudge::generate_corpus({2000, 5});
  return c;
}

void BM_WhoScore(benchmark::State& state) {
  const auto& recipes = corpus().recipes;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nudge::who_health_score(recipes[i++ % recipes.size()]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_WhoScore);

void BM_FsaScore(benchmark::State& state) {
  const auto& recipes = corpus().recipes;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nudge::fsa_health_score(recipes[i++ % recipes.size()]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FsaScore);

void BM_Recommend(benchmark::State& state) {
  auto catalog = nudge::build_catalog(corpus().recipes, corpus().associations);
  const auto& vocab = corpus().vocabulary;
  std::vector<std::string> liked(vocab.begin(), vocab.begin() + 20);
  std::vector<std::string> disliked(vocab.begin() + 20, vocab.begin() + 40);
  auto taste = nudge::build_taste_profile(liked, disliked, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(nudge::recommend(taste, catalog, "chicken"));
  }
}
BENCHMARK(BM_Recommend)->Unit(benchmark::kMicrosecond);

void BM_Ndpm(benchmark::State& state) {
  std::vector<std::pair<std::string, int>> scores;
  std::map<std::string, int> ratings;
  for (int i = 0; i < 7; ++i) {
    auto id = "r" + std::to_string(i);
    scores.emplace_back(id, (i * 3) % 9);
    ratings[id] = (i * 5) % 6;
  }
  std::vector<std::string> ids;
  for (const auto& [id, _] : scores) ids.push_back(id);
  for (auto _ : state) {
    auto sys = nudge::system_rank(scores, nudge::RankBasis::SystemWho);
    auto usr = nudge::user_rank(ids, ratings);
    benchmark::DoNotOptimize(nudge::ndpm(sys, usr));
  }
}
BENCHMARK(BM_Ndpm);

void BM_Simulation(benchmark::State& state) {
  auto catalog = nudge::build_catalog(corpus().recipes, corpus().associations);
  nudge::SimulationOptions opt;
  opt.participants = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(nudge::run_simulation(catalog, corpus().vocabulary, corpus().dishes, opt));
  }
}
BENCHMARK(BM_Simulation)->Arg(24)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
