#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nudge/corpus.hpp"
#include "nudge/food_type.hpp"
#include "nudge/fsa_scoring.hpp"
#include "nudge/who_scoring.hpp"

namespace nudge {

inline constexpr std::size_t kMinProfileFeatures = 20;
inline constexpr std::size_t kRecListSize = 7;

struct TasteProfile {
  std::set<std::string> liked_features;
  std::set<std::string> disliked_features;
  std::vector<double> topic_affinity;
};

/// Lower-cases and trims feature names, then checks the liked/disliked sets
/// are disjoint and each holds at least kMinProfileFeatures entries. An empty
/// affinity vector becomes all zeros. Throws ValidationError.
TasteProfile build_taste_profile(const std::vector<std::string>& liked, const std::vector<std::string>& disliked,
                                 std::vector<double> topic_affinity, std::size_t topic_count = 30);

/// Everything the recommender and the scorers read. Immutable once built.
struct Catalog {
  std::vector<Recipe> recipes;
  AssociationMatrix associations;
  TopicTable topics = default_topic_table();
  BreakfastDictionary breakfast;
  WhoGoals who_goals;
  FsaConfig fsa = default_fsa_config();

  const Recipe* find(std::string_view id) const;
  const TopicAssociations* associations_for(std::string_view id) const;

  /// Rebuilds the id index; call after mutating `recipes`.
  void reindex();

 private:
  std::map<std::string, std::size_t, std::less<>> by_id_;
};

struct ExcludedRecipe {
  std::string id;
  std::string reason;
};

/// Builds an indexed catalog, dropping recipes whose health scores cannot be
/// computed (zero macro energy) so every served recipe carries both scores.
Catalog build_catalog(std::vector<Recipe> recipes, AssociationMatrix associations,
                      std::vector<ExcludedRecipe>* excluded = nullptr);

struct ScoredRecipe {
  Recipe recipe;
  double preference_score = 0.0;
  int who_score = 0;
  FsaHealthScore fsa;
  FoodType food_type = FoodType::Meal;
  // Set when the recipe had no usable topic signal and fell back to Meal.
  bool food_type_fallback = false;
};

struct ScorerOptions {
  double topic_weight = 1.0;
};

/// |tags ∩ liked| - |tags ∩ disliked| + topic_weight * (affinity · assoc).
/// Missing associations contribute zero.
double score_recipe(const TasteProfile& profile, const Recipe& recipe, const TopicAssociations* assoc,
                    const ScorerOptions& options = {});

/// Food type with a Meal fallback when the recipe carries no topic signal.
std::pair<FoodType, bool> classify(const Catalog& catalog, const Recipe& recipe);

/// Attaches WHO, FSA and food-type information to a recipe.
ScoredRecipe enrich(const Catalog& catalog, const Recipe& recipe, double preference_score);

/// Case-insensitive substring match of `query` against the title or any tag.
/// An empty query matches everything.
bool matches_query(const Recipe& recipe, std::string_view query);

/// Filter, score, sort by preference (ties by ascending id), truncate to k.
/// An empty result is a normal outcome.
std::vector<ScoredRecipe> recommend(const TasteProfile& profile, const Catalog& catalog, std::string_view query,
                                    std::size_t k = kRecListSize, const ScorerOptions& options = {});

}  // namespace nudge
