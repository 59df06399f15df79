#include "nudge/food_type.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "nudge/error.hpp"

namespace nudge {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(std::string(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

std::string_view to_string(FoodType t) {
  switch (t) {
    case FoodType::Meal: return "meal";
    case FoodType::Side: return "side";
    case FoodType::Snack: return "snack";
    case FoodType::Drink: return "drink";
    case FoodType::Breakfast: return "breakfast";
  }
  return "meal";
}

FoodType parse_food_type(std::string_view s) {
  for (FoodType t : kAllFoodTypes) {
    if (to_string(t) == s) return t;
  }
  throw ConfigError(fmt::format("unknown food type '{}'", s));
}

TopicTable::TopicTable(std::vector<Topic> topics) : topics_(std::move(topics)) {
  if (topics_.empty()) throw ConfigError("topic table is empty");
  std::set<int> ids;
  for (const auto& t : topics_) {
    if (!ids.insert(t.id).second) throw ConfigError(fmt::format("duplicate topic id {}", t.id));
  }
}

std::size_t TopicTable::index_of(int topic_id) const {
  for (std::size_t i = 0; i < topics_.size(); ++i) {
    if (topics_[i].id == topic_id) return i;
  }
  throw ConfigError(fmt::format("unknown topic id {}", topic_id));
}

const TopicTable& default_topic_table() {
  static const TopicTable table = [] {
    using F = FoodType;
    const std::pair<const char*, F> rows[] = {
        {"Quick and Easy Snack", F::Snack},
        {"Easy Fish Mains", F::Meal},
        {"Rice Dishes", F::Side},
        {"Tropical Juice and Desserts", F::Drink},
        {"Beef based Mains", F::Meal},
        {"Vegetable Dishes", F::Meal},
        {"Seafood Mains", F::Meal},
        {"Chicken Mains", F::Meal},
        {"Health Conscious", F::Side},
        {"Quick and Easy bread", F::Breakfast},
        {"Banana based Desserts and Drinks", F::Breakfast},
        {"Sweet Desserts for Holidays", F::Snack},
        {"Pies and Tarts", F::Snack},
        {"Savory Greek Mains", F::Meal},
        {"Potato based Small Bites", F::Side},
        {"Spicy and Umami curry", F::Meal},
        {"Smoothies", F::Drink},
        {"Turkey Mains", F::Meal},
        {"Citrus based Food-preserves, Drinks and Mains", F::Meal},
        {"Holiday pies", F::Snack},
        {"Pork Mains", F::Meal},
        {"Cheesy Dishes", F::Side},
        {"Pasta Mains", F::Meal},
        {"Soups and Stews", F::Side},
        {"Floret Star-fries and Salads", F::Side},
        {"Chinese Desserts", F::Snack},
        {"Quiches", F::Meal},
        {"Corn based Mexican", F::Side},
        {"Turkey Mains", F::Meal},
        {"Roman", F::Meal},
    };
    std::vector<Topic> topics;
    int id = 1;
    for (const auto& [label, type] : rows) topics.push_back({id++, label, type, {}});
    return TopicTable(std::move(topics));
  }();
  return table;
}

TopicTable parse_topic_table(std::istream& in) {
  std::vector<Topic> topics;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() < 3) {
      throw ConfigError(fmt::format("topic table line {}: expected at least 3 tab-separated columns", line_no));
    }
    Topic topic;
    try {
      topic.id = std::stoi(trim(cols[0]));
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("topic table line {}: bad topic id", line_no));
    }
    topic.label = trim(cols[1]);
    topic.food_type = parse_food_type(trim(cols[2]));
    if (cols.size() > 3) {
      for (auto& d : split(cols[3], ',')) {
        auto term = trim(d);
        if (!term.empty()) topic.descriptors.push_back(std::move(term));
      }
    }
    topics.push_back(std::move(topic));
  }
  return TopicTable(std::move(topics));
}

TopicTable load_topic_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(fmt::format("cannot open topic table: {}", path.string()));
  return parse_topic_table(in);
}

void validate_associations(const TopicAssociations& assoc, std::size_t topic_count) {
  if (assoc.scores.size() != topic_count) {
    throw ValidationError("scores", fmt::format("expected {} association scores, got {}", topic_count,
                                                assoc.scores.size()));
  }
  for (double s : assoc.scores) {
    if (!std::isfinite(s) || s < 0.0) throw ValidationError("scores", "association scores must be finite and >= 0");
  }
}

AssociationMatrix parse_associations(std::istream& in, std::size_t topic_count) {
  AssociationMatrix out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto cols = split(t, ',');
    std::string id = trim(cols.front());
    TopicAssociations assoc;
    for (std::size_t i = 1; i < cols.size(); ++i) {
      try {
        std::size_t used = 0;
        std::string cell = trim(cols[i]);
        assoc.scores.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ValidationError("scores", fmt::format("association line {}: bad score in column {}", line_no, i + 1));
      }
    }
    try {
      validate_associations(assoc, topic_count);
    } catch (const ValidationError& e) {
      throw ValidationError("scores", fmt::format("association line {}: {}", line_no, e.what()));
    }
    out[id] = std::move(assoc);
  }
  return out;
}

AssociationMatrix load_associations(const std::filesystem::path& path, std::size_t topic_count) {
  std::ifstream in(path);
  if (!in) throw LoadError(fmt::format("cannot open association matrix: {}", path.string()));
  return parse_associations(in, topic_count);
}

std::vector<RankedTopic> top_topics(const TopicAssociations& assoc, const TopicTable& table, std::size_t count) {
  validate_associations(assoc, table.size());
  count = std::min(count, table.size());
  std::vector<std::size_t> order(table.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (assoc.scores[a] != assoc.scores[b]) return assoc.scores[a] > assoc.scores[b];
                      return table.at(a).id < table.at(b).id;
                    });
  std::vector<RankedTopic> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back({table.at(order[i]).id, assoc.scores[order[i]]});
  return out;
}

std::array<double, kFoodTypeCount> food_type_scores(const TopicAssociations& assoc, const TopicTable& table) {
  std::array<double, kFoodTypeCount> sums{};
  for (const auto& t : top_topics(assoc, table)) {
    sums[static_cast<std::size_t>(table.at(table.index_of(t.topic_id)).food_type)] += t.score;
  }
  return sums;
}

FoodType predict_food_type(const TopicAssociations& assoc, const TopicTable& table) {
  const auto top = top_topics(assoc, table);
  std::array<double, kFoodTypeCount> sums{};
  std::array<double, kFoodTypeCount> best_single{};
  bool any_signal = false;
  for (const auto& t : top) {
    auto type = static_cast<std::size_t>(table.at(table.index_of(t.topic_id)).food_type);
    sums[type] += t.score;
    best_single[type] = std::max(best_single[type], t.score);
    any_signal = any_signal || t.score > 0.0;
  }
  if (!any_signal) throw ScoringError("no topical signal");

  std::size_t winner = 0;
  for (std::size_t i = 1; i < kFoodTypeCount; ++i) {
    if (sums[i] > sums[winner] || (sums[i] == sums[winner] && best_single[i] > best_single[winner])) {
      winner = i;
    }
  }
  return static_cast<FoodType>(winner);
}

BreakfastDictionary::BreakfastDictionary()
    : BreakfastDictionary({"pancake", "waffle", "oatmeal", "porridge", "cereal", "granola", "muesli", "toast",
                           "bagel", "muffin", "omelette", "scramble", "brunch", "breakfast"}) {}

BreakfastDictionary::BreakfastDictionary(std::vector<std::string> terms) {
  for (auto& t : terms) {
    auto w = lower(trim(t));
    if (!w.empty()) terms_.push_back(std::move(w));
  }
}

bool BreakfastDictionary::matches(std::string_view text) const {
  for (const auto& w : words(text)) {
    for (const auto& term : terms_) {
      if (w == term || w == term + "s" || w == term + "es") return true;
    }
  }
  return false;
}

FoodType breakfast_reclassify(const Recipe& recipe, FoodType provisional, const BreakfastDictionary& dict) {
  if (provisional != FoodType::Side && provisional != FoodType::Snack) return provisional;
  if (dict.matches(recipe.title)) return FoodType::Breakfast;
  for (const auto& a : recipe.dish_annotations) {
    if (dict.matches(a)) return FoodType::Breakfast;
  }
  return provisional;
}

FoodType predict_food_type(const Recipe& recipe, const TopicAssociations& assoc, const TopicTable& table,
                           const BreakfastDictionary& dict) {
  return breakfast_reclassify(recipe, predict_food_type(assoc, table), dict);
}

}  // namespace nudge
