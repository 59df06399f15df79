#include "nudge/recommender.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <fmt/format.h>

#include "nudge/error.hpp"

namespace nudge {

namespace {

std::string normalize_feature(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::set<std::string> normalize_set(const std::vector<std::string>& in) {
  std::set<std::string> out;
  for (const auto& s : in) {
    auto n = normalize_feature(s);
    if (!n.empty()) out.insert(std::move(n));
  }
  return out;
}

}  // namespace

TasteProfile build_taste_profile(const std::vector<std::string>& liked, const std::vector<std::string>& disliked,
                                 std::vector<double> topic_affinity, std::size_t topic_count) {
  TasteProfile p;
  p.liked_features = normalize_set(liked);
  p.disliked_features = normalize_set(disliked);
  for (const auto& f : p.liked_features) {
    if (p.disliked_features.count(f)) {
      throw ValidationError("disliked", fmt::format("feature '{}' is both liked and disliked", f));
    }
  }
  if (p.liked_features.size() < kMinProfileFeatures) {
    throw ValidationError("liked", fmt::format("select a minimum {} liked features (got {})", kMinProfileFeatures,
                                               p.liked_features.size()));
  }
  if (p.disliked_features.size() < kMinProfileFeatures) {
    throw ValidationError("disliked", fmt::format("select a minimum {} disliked features (got {})",
                                                  kMinProfileFeatures, p.disliked_features.size()));
  }
  if (topic_affinity.empty()) topic_affinity.assign(topic_count, 0.0);
  if (topic_affinity.size() != topic_count) {
    throw ValidationError("topic_affinity",
                          fmt::format("expected {} topic affinities, got {}", topic_count, topic_affinity.size()));
  }
  for (double a : topic_affinity) {
    if (!std::isfinite(a)) throw ValidationError("topic_affinity", "topic affinities must be finite");
  }
  p.topic_affinity = std::move(topic_affinity);
  return p;
}

const Recipe* Catalog::find(std::string_view id) const {
  if (by_id_.size() == recipes.size()) {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &recipes[it->second];
  }
  for (const auto& r : recipes) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

void Catalog::reindex() {
  by_id_.clear();
  for (std::size_t i = 0; i < recipes.size(); ++i) by_id_.emplace(recipes[i].id, i);
}

Catalog build_catalog(std::vector<Recipe> recipes, AssociationMatrix associations,
                      std::vector<ExcludedRecipe>* excluded) {
  Catalog c;
  c.associations = std::move(associations);
  c.recipes.reserve(recipes.size());
  for (auto& r : recipes) {
    try {
      (void)energy_shares(r.per_portion);
      c.recipes.push_back(std::move(r));
    } catch (const ScoringError& e) {
      if (excluded != nullptr) excluded->push_back({r.id, e.what()});
    }
  }
  c.reindex();
  return c;
}

const TopicAssociations* Catalog::associations_for(std::string_view id) const {
  auto it = associations.find(id);
  return it == associations.end() ? nullptr : &it->second;
}

double score_recipe(const TasteProfile& profile, const Recipe& recipe, const TopicAssociations* assoc,
                    const ScorerOptions& options) {
  double score = 0.0;
  for (const auto& tag : recipe.feature_tags) {
    const std::string t = normalize_feature(tag);
    if (profile.liked_features.count(t)) score += 1.0;
    if (profile.disliked_features.count(t)) score -= 1.0;
  }
  if (assoc != nullptr) {
    const std::size_t n = std::min(assoc->scores.size(), profile.topic_affinity.size());
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += profile.topic_affinity[i] * assoc->scores[i];
    score += options.topic_weight * dot;
  }
  return score;
}

std::pair<FoodType, bool> classify(const Catalog& catalog, const Recipe& recipe) {
  const TopicAssociations* assoc = catalog.associations_for(recipe.id);
  if (assoc == nullptr) return {FoodType::Meal, true};
  try {
    return {predict_food_type(recipe, *assoc, catalog.topics, catalog.breakfast), false};
  } catch (const ScoringError&) {
    return {FoodType::Meal, true};
  }
}

ScoredRecipe enrich(const Catalog& catalog, const Recipe& recipe, double preference_score) {
  ScoredRecipe s;
  s.recipe = recipe;
  s.preference_score = preference_score;
  s.who_score = who_health_score(recipe, catalog.who_goals);
  s.fsa = fsa_health_score(recipe, catalog.fsa);
  std::tie(s.food_type, s.food_type_fallback) = classify(catalog, recipe);
  return s;
}

bool matches_query(const Recipe& recipe, std::string_view query) {
  const std::string q = normalize_feature(query);
  if (q.empty()) return true;
  auto contains = [&](std::string_view text) {
    std::string lowered(text);
    for (auto& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return lowered.find(q) != std::string::npos;
  };
  if (contains(recipe.title)) return true;
  return std::any_of(recipe.feature_tags.begin(), recipe.feature_tags.end(), contains);
}

std::vector<ScoredRecipe> recommend(const TasteProfile& profile, const Catalog& catalog, std::string_view query,
                                    std::size_t k, const ScorerOptions& options) {
  struct Candidate {
    const Recipe* recipe;
    double score;
  };
  std::vector<Candidate> pool;
  for (const auto& r : catalog.recipes) {
    if (!matches_query(r, query)) continue;
    pool.push_back({&r, score_recipe(profile, r, catalog.associations_for(r.id), options)});
  }
  std::sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.recipe->id < b.recipe->id;
  });
  if (pool.size() > k) pool.resize(k);

  std::vector<ScoredRecipe> out;
  out.reserve(pool.size());
  for (const auto& c : pool) out.push_back(enrich(catalog, *c.recipe, c.score));
  return out;
}

}  // namespace nudge
