#include "nudge/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "nudge/error.hpp"
#include "nudge/service.hpp"

namespace nudge {

namespace {

const std::vector<std::string> kDishes = {"chicken", "salad",  "soup",    "pasta",  "curry", "stew",
                                          "tacos",   "risotto", "burger", "casserole", "pie", "noodles"};
const std::vector<std::string> kStyles = {"spicy", "creamy", "quick", "rustic", "baked", "grilled", "classic"};

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

Recipe synthetic_recipe(std::mt19937_64& rng, std::size_t index, const std::vector<std::string>& vocab,
                        const SyntheticCorpusOptions& opt) {
  Recipe r;
  r.id = fmt::format("syn-{:05d}", index);
  const auto& dish = kDishes[pick(rng, kDishes.size())];
  r.title = fmt::format("{} {} {}", kStyles[pick(rng, kStyles.size())], dish, index);
  r.title[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(r.title[0])));
  r.serving_weight_g = uniform(rng, 200.0, 550.0);

  double kcal = uniform(rng, 200.0, 1000.0);
  double protein_pct = std::clamp(std::normal_distribution<double>(14.0, 5.0)(rng), 4.0, 40.0);
  double fat_pct = std::clamp(std::normal_distribution<double>(27.0, 9.0)(rng), 5.0, 60.0);
  double carb_pct = 100.0 - protein_pct - fat_pct;
  double sugar_pct = std::min(uniform(rng, 0.0, 20.0), carb_pct);
  double satfat_pct = std::min(uniform(rng, 2.0, 18.0), fat_pct);

  auto& n = r.per_portion;
  n.protein_g = kcal * protein_pct / 100.0 / atwater::kProteinKcalPerG;
  n.carbohydrate_g = kcal * carb_pct / 100.0 / atwater::kCarbohydrateKcalPerG;
  n.total_fat_g = kcal * fat_pct / 100.0 / atwater::kFatKcalPerG;
  n.sugar_g = kcal * sugar_pct / 100.0 / atwater::kCarbohydrateKcalPerG;
  n.saturated_fat_g = kcal * satfat_pct / 100.0 / atwater::kFatKcalPerG;
  n.sodium_mg = kcal * uniform(rng, 0.3, 2.0);
  n.cholesterol_mg = kcal * uniform(rng, 0.0, 0.3);
  n.fiber_g = kcal * uniform(rng, 0.0, 0.025);
  r.calories_per_portion = n.protein_g * atwater::kProteinKcalPerG + n.carbohydrate_g * atwater::kCarbohydrateKcalPerG +
                           n.total_fat_g * atwater::kFatKcalPerG;

  auto tags = std::uniform_int_distribution<std::size_t>(opt.min_tags, opt.max_tags)(rng);
  std::vector<std::string> shuffled = vocab;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  for (std::size_t i = 0; i < std::min(tags, shuffled.size()); ++i) r.feature_tags.insert(shuffled[i]);
  r.feature_tags.insert(dish);
  return r;
}

TopicAssociations synthetic_associations(std::mt19937_64& rng, const TopicTable& topics) {
  auto dominant = kAllFoodTypes[pick(rng, kAllFoodTypes.size())];
  TopicAssociations a;
  for (const auto& t : topics.topics()) {
    a.scores.push_back(t.food_type == dominant ? uniform(rng, 0.2, 1.0) : uniform(rng, 0.0, 0.3));
  }
  return a;
}

UserHealthInput random_health(std::mt19937_64& rng) {
  UserHealthInput h;
  h.age_years = std::floor(uniform(rng, 18.0, 70.0));
  h.height_m = uniform(rng, 1.50, 1.95);
  h.weight_kg = std::clamp(std::normal_distribution<double>(24.0, 4.5)(rng), 16.0, 42.0) * h.height_m * h.height_m;
  h.gender = static_cast<Gender>(pick(rng, 3));
  h.activity = static_cast<Activity>(pick(rng, 4));
  h.meals_per_day = 3;
  return h;
}

}  // namespace

std::vector<std::string> feature_vocabulary(std::size_t size) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < size; ++i) v.push_back(fmt::format("feature-{:02d}", i + 1));
  return v;
}

SyntheticCorpus generate_corpus(const SyntheticCorpusOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  SyntheticCorpus c;
  c.vocabulary = feature_vocabulary(opt.vocabulary);
  c.dishes = kDishes;
  const auto& topics = default_topic_table();
  for (std::size_t i = 0; i < opt.recipes; ++i) {
    auto r = synthetic_recipe(rng, i + 1, c.vocabulary, opt);
    c.associations[r.id] = synthetic_associations(rng, topics);
    c.recipes.push_back(std::move(r));
  }
  return c;
}

std::string_view to_string(RaterMode m) {
  switch (m) {
    case RaterMode::Perfect: return "perfect";
    case RaterMode::Anti: return "anti";
    case RaterMode::Random: return "random";
  }
  return "random";
}

RaterMode parse_rater_mode(std::string_view s) {
  for (auto m : {RaterMode::Perfect, RaterMode::Anti, RaterMode::Random}) {
    if (to_string(m) == s) return m;
  }
  throw ValidationError("mode", fmt::format("unknown rater mode '{}'", s));
}

SimulationResult run_simulation(const Catalog& catalog, const std::vector<std::string>& vocabulary,
                                const std::vector<std::string>& queries, const SimulationOptions& opt) {
  if (vocabulary.size() < 2 * kMinProfileFeatures) {
    throw ValidationError("vocabulary", fmt::format("simulated participants need at least {} features",
                                                    2 * kMinProfileFeatures));
  }
  auto started = std::chrono::steady_clock::now();
  SimulationResult result;

  std::int64_t clock_ms = 1'700'000'000'000;
  std::uint64_t token_counter = 0;
  ServiceOptions so;
  so.admin_token = "simulation-admin";
  so.clock = [&clock_ms] { return clock_ms; };
  so.token_source = [&token_counter] { return fmt::format("sim-{:08d}", ++token_counter); };
  Service service(catalog, so);
  const auto health = health_index(service.catalog());

  auto post = [&](const std::string& path, const std::string& token, nlohmann::json body) {
    clock_ms += 250;
    auto res = service.handle({"POST", path, token, std::move(body)});
    if (res.status >= 400) ++result.rejected_requests;
    return res;
  };

  for (std::size_t i = 0; i < opt.participants; ++i) {
    std::mt19937_64 rng(opt.seed * 1'000'003ULL + i);
    std::normal_distribution<double> noise(0.0, opt.noise_sd);

    auto shuffled = vocabulary;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<std::string> liked(shuffled.begin(), shuffled.begin() + kMinProfileFeatures);
    std::vector<std::string> disliked(shuffled.begin() + kMinProfileFeatures,
                                      shuffled.begin() + 2 * kMinProfileFeatures);
    std::vector<double> affinity;
    for (std::size_t t = 0; t < catalog.topics.size(); ++t) affinity.push_back(uniform(rng, -1.0, 1.0));
    auto taste = build_taste_profile(liked, disliked, affinity, catalog.topics.size());

    auto signup = post("/v1/signup", "",
                       {{"health", to_json(random_health(rng))},
                        {"liked", liked},
                        {"disliked", disliked},
                        {"topic_affinity", affinity},
                        {"consent", true}});
    if (signup.status != 201) continue;
    ++result.participants;
    auto token = signup.body.at("token").get<std::string>();

    for (const auto& list_name : signup.body.at("sequence")) {
      auto name = list_name.get<std::string>();
      auto kind = *ServiceOptions{}.names.resolve(name);
      double w = is_nudged(kind) ? opt.nudge_weight : opt.no_nudge_weight;

      auto query = queries.empty() ? std::string{} : queries[pick(rng, queries.size())];
      auto rec = post("/v1/recommend", token, {{"scenario", name}, {"query", query}});
      if (rec.status == 422) rec = post("/v1/recommend", token, {{"scenario", name}, {"query", ""}});
      if (rec.status != 200) break;

      std::vector<std::string> ids;
      std::vector<double> taste_scores;
      for (const auto& item : rec.body.at("items")) {
        auto id = item.at("recipe_id").get<std::string>();
        const auto* recipe = service.catalog().find(id);
        taste_scores.push_back(score_recipe(taste, *recipe, service.catalog().associations_for(id)));
        ids.push_back(std::move(id));
      }
      auto [lo, hi] = std::minmax_element(taste_scores.begin(), taste_scores.end());
      double span = *hi - *lo;
      std::vector<double> blend(ids.size());
      for (std::size_t k = 0; k < ids.size(); ++k) {
        double t = span > 0.0 ? (taste_scores[k] - *lo) / span : 0.5;
        double who = health.at(ids[k]).who_score / 8.0;
        blend[k] = (1.0 - w) * t + w * who;
      }

      std::vector<std::size_t> order(ids.size());
      std::iota(order.begin(), order.end(), 0);
      std::vector<double> appeal(ids.size());
      for (std::size_t k = 0; k < ids.size(); ++k) appeal[k] = blend[k] + noise(rng);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return appeal[a] > appeal[b]; });

      for (std::size_t k : order) {
        const auto& id = ids[k];
        post("/v1/event", token, {{"scenario", name}, {"recipe_id", id}, {"event", "click"}});
        post("/v1/event", token, {{"scenario", name}, {"recipe_id", id}, {"event", "browse_start"}});
        double felt = std::clamp(blend[k] + noise(rng), 0.0, 1.0);
        int rating = static_cast<int>(std::lround(felt * kMaxRecipeRating));
        post("/v1/event", token, {{"scenario", name}, {"recipe_id", id}, {"event", "rate"}, {"value", rating}});
        post("/v1/event", token, {{"scenario", name}, {"recipe_id", id}, {"event", "browse_end"}});
      }
      post("/v1/event", token, {{"scenario", name}, {"recipe_id", ids[order.front()]}, {"event", "pin"}});
    }

    if (post("/v1/questionnaire/start", token, nlohmann::json::object()).status != 200) continue;
    ++result.completed;
    for (const auto& list_name : signup.body.at("sequence")) {
      nlohmann::json answers = {{"scenario", list_name}};
      for (auto c : kAllCriteria) {
        answers[std::string(to_string(c))] = std::uniform_int_distribution<int>(1, 5)(rng);
      }
      post("/v1/questionnaire", token, answers);
    }
  }

  result.events = service.store().events();
  result.report = compute_report(collect_sessions(result.events), health);
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

std::vector<SessionEvent> synthetic_rater_log(const HealthIndex& health, const RaterLogOptions& opt) {
  if (opt.list_size < 2) throw ValidationError("list_size", "lists need at least two recipes");
  std::map<int, std::vector<std::string>> by_score;
  std::vector<std::string> all;
  for (const auto& [id, h] : health) {
    by_score[h.who_score].push_back(id);
    all.push_back(id);
  }
  bool ordered = opt.mode != RaterMode::Random;
  if (ordered && (opt.list_size > static_cast<std::size_t>(kMaxRecipeRating + 1) || by_score.size() < opt.list_size)) {
    throw ValidationError("list_size",
                          fmt::format("ordered raters need {} distinct WHO scores and at most {} per list",
                                      opt.list_size, kMaxRecipeRating + 1));
  }
  if (all.size() < opt.list_size) throw ValidationError("list_size", "not enough recipes for one list");

  std::mt19937_64 rng(opt.seed);
  std::vector<int> scores;
  for (const auto& [s, _] : by_score) scores.push_back(s);

  std::vector<SessionEvent> log;
  std::int64_t t = 1'700'000'000'000;
  for (std::size_t s = 0; s < opt.sessions; ++s) {
    auto participant = fmt::format("R{:05d}", s / kScenarioCount + 1);
    auto scenario = kAllScenarios[s % kScenarioCount];
    std::vector<std::string> ids;
    std::vector<int> ratings;
    if (ordered) {
      auto chosen = scores;
      std::shuffle(chosen.begin(), chosen.end(), rng);
      chosen.resize(opt.list_size);
      for (std::size_t k = 0; k < opt.list_size; ++k) {
        const auto& pool = by_score.at(chosen[k]);
        ids.push_back(pool[pick(rng, pool.size())]);
      }
      for (std::size_t k = 0; k < opt.list_size; ++k) {
        // Position of chosen[k] among the list's scores, highest first.
        int above = 0;
        for (int other : chosen) above += other > chosen[k] ? 1 : 0;
        int rating = opt.mode == RaterMode::Perfect ? kMaxRecipeRating - above
                                                    : kMaxRecipeRating - (static_cast<int>(opt.list_size) - 1 - above);
        ratings.push_back(rating);
      }
    } else {
      auto shuffled = all;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      ids.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(opt.list_size));
      for (std::size_t k = 0; k < opt.list_size; ++k) {
        ratings.push_back(std::uniform_int_distribution<int>(kMinRecipeRating, kMaxRecipeRating)(rng));
      }
    }
    for (std::size_t k = 0; k < ids.size(); ++k) {
      log.push_back({participant, scenario, ids[k], EventKind::Serve, static_cast<int>(k + 1), t});
    }
    std::size_t best = static_cast<std::size_t>(std::max_element(ratings.begin(), ratings.end()) - ratings.begin());
    log.push_back({participant, scenario, ids[best], EventKind::Click, std::nullopt, t += 1000});
    for (std::size_t k = 0; k < ids.size(); ++k) {
      log.push_back({participant, scenario, ids[k], EventKind::Rate, ratings[k], t += 1000});
    }
    log.push_back({participant, scenario, ids[best], EventKind::Pin, std::nullopt, t += 1000});
  }
  return log;
}

}  // namespace nudge
