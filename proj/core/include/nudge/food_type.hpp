#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nudge/corpus.hpp"

namespace nudge {

enum class FoodType { Meal = 0, Side, Snack, Drink, Breakfast };
inline constexpr std::size_t kFoodTypeCount = 5;
inline constexpr std::array<FoodType, kFoodTypeCount> kAllFoodTypes{
    FoodType::Meal, FoodType::Side, FoodType::Snack, FoodType::Drink, FoodType::Breakfast};

std::string_view to_string(FoodType t);
FoodType parse_food_type(std::string_view s);

struct Topic {
  int id = 0;
  std::string label;
  FoodType food_type = FoodType::Meal;
  std::vector<std::string> descriptors;
};

/// Ordered topic list; position i holds the topic whose association score
/// sits at index i of every TopicAssociations vector.
class TopicTable {
 public:
  TopicTable() = default;
  /// Throws ConfigError on duplicate ids or an empty table.
  explicit TopicTable(std::vector<Topic> topics);

  std::size_t size() const { return topics_.size(); }
  const Topic& at(std::size_t index) const { return topics_.at(index); }
  const std::vector<Topic>& topics() const { return topics_; }
  /// Index of a topic id, or throws ConfigError.
  std::size_t index_of(int topic_id) const;

 private:
  std::vector<Topic> topics_;
};

/// The 30 ensemble topics and their food-type labels.
const TopicTable& default_topic_table();

/// Tab-separated rows: id, label, food_type, comma-separated descriptors.
/// Lines starting with '#' are comments.
TopicTable load_topic_table(const std::filesystem::path& path);
TopicTable parse_topic_table(std::istream& in);

struct TopicAssociations {
  std::vector<double> scores;
};

/// recipe_id -> association vector.
using AssociationMatrix = std::map<std::string, TopicAssociations, std::less<>>;

/// Comma-separated rows: recipe_id followed by one score per topic.
/// Throws LoadError on unreadable files and ValidationError on bad rows.
AssociationMatrix load_associations(const std::filesystem::path& path, std::size_t topic_count);
AssociationMatrix parse_associations(std::istream& in, std::size_t topic_count);

/// Throws ValidationError on negative or non-finite scores or a length
/// mismatch with the topic table.
void validate_associations(const TopicAssociations& assoc, std::size_t topic_count);

inline constexpr std::size_t kTopTopicCount = 7;

struct RankedTopic {
  int topic_id;
  double score;
};

/// The `count` highest-scoring topics, descending; equal scores are ordered by
/// ascending topic id.
std::vector<RankedTopic> top_topics(const TopicAssociations& assoc, const TopicTable& table,
                                    std::size_t count = kTopTopicCount);

/// Cumulative association per food type over the top topics.
std::array<double, kFoodTypeCount> food_type_scores(const TopicAssociations& assoc, const TopicTable& table);

/// Provisional food type (argmax of food_type_scores). Ties go to the type
/// holding the single highest-scoring topic, then to enumeration order.
/// Throws ScoringError("no topical signal") when every top topic scores 0.
FoodType predict_food_type(const TopicAssociations& assoc, const TopicTable& table);

class BreakfastDictionary {
 public:
  BreakfastDictionary();  // bundled word list
  explicit BreakfastDictionary(std::vector<std::string> terms);

  /// Whole-word, case-insensitive; a trailing "s" or "es" plural also matches.
  bool matches(std::string_view text) const;
  const std::vector<std::string>& terms() const { return terms_; }

 private:
  std::vector<std::string> terms_;
};

/// Side and snack recipes whose title or dish annotations hit the dictionary
/// become breakfast; every other provisional type is returned unchanged.
FoodType breakfast_reclassify(const Recipe& recipe, FoodType provisional, const BreakfastDictionary& dict);

/// predict_food_type followed by breakfast_reclassify.
FoodType predict_food_type(const Recipe& recipe, const TopicAssociations& assoc, const TopicTable& table,
                           const BreakfastDictionary& dict);

}  // namespace nudge
