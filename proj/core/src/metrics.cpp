#include "nudge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "nudge/error.hpp"

namespace nudge {

std::string_view to_string(RankBasis b) {
  switch (b) {
    case RankBasis::SystemWho: return "system_who";
    case RankBasis::SystemFsa: return "system_fsa";
    case RankBasis::UserRating: return "user_rating";
  }
  return "system_who";
}

std::string_view to_string(TieRule t) {
  switch (t) {
    case TieRule::Ceiling: return "ceiling";
    case TieRule::Floor: return "floor";
    case TieRule::Fractional: return "fractional";
  }
  return "ceiling";
}

TieRule parse_tie_rule(std::string_view s) {
  for (auto t : {TieRule::Ceiling, TieRule::Floor, TieRule::Fractional}) {
    if (to_string(t) == s) return t;
  }
  throw ValidationError("tie_rule", fmt::format("unknown tie rule '{}'", s));
}

std::optional<double> RankedList::rank_of(std::string_view recipe_id) const {
  for (const auto& item : items) {
    if (item.recipe_id == recipe_id) return item.rank;
  }
  return std::nullopt;
}

double normalized_who(int who_score) { return 1.0 + who_score * 4.0 / 8.0; }

double normalized_fsa(int fsa_score) { return 1.0 + (16 - fsa_score) * 4.0 / 12.0; }

std::vector<double> rank_descending(const std::vector<double>& values, TieRule rule) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    double first = static_cast<double>(i + 1);
    double last = static_cast<double>(j + 1);
    double r = rule == TieRule::Ceiling ? last : rule == TieRule::Floor ? first : 0.5 * (first + last);
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

namespace {

RankedList make_list(RankBasis basis, const std::vector<std::string>& ids, const std::vector<double>& values,
                     TieRule rule) {
  auto ranks = rank_descending(values, rule);
  RankedList list;
  list.basis = basis;
  for (std::size_t i = 0; i < ids.size(); ++i) list.items.push_back({ids[i], ranks[i]});
  return list;
}

}  // namespace

RankedList system_rank(const std::vector<std::pair<std::string, int>>& scores, RankBasis basis, TieRule rule) {
  if (basis == RankBasis::UserRating) throw ValidationError("basis", "system ranks need a WHO or FSA basis");
  if (scores.size() < 2) throw ValidationError("reclist", "system ranking needs at least two recipes");
  std::vector<std::string> ids;
  std::vector<double> values;
  for (const auto& [id, s] : scores) {
    ids.push_back(id);
    values.push_back(basis == RankBasis::SystemWho ? normalized_who(s) : normalized_fsa(s));
  }
  return make_list(basis, ids, values, rule);
}

RankedList user_rank(const std::vector<std::string>& recipe_ids, const std::map<std::string, int>& ratings,
                     TieRule rule) {
  std::vector<double> values;
  for (const auto& id : recipe_ids) {
    auto it = ratings.find(id);
    if (it == ratings.end()) throw ValidationError("ratings", fmt::format("recipe '{}' has no rating", id));
    values.push_back(it->second);
  }
  return make_list(RankBasis::UserRating, recipe_ids, values, rule);
}

MetricValue ppmcc(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("ppmcc", "paired vectors differ in length");
  if (x.size() < 2) return {std::nullopt, "fewer than two pairs"};
  double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return {std::nullopt, "zero variance"};
  double r = sxy / std::sqrt(sxx * syy);
  return {std::clamp(r, -1.0, 1.0), ""};
}

MetricValue ppmcc(const std::vector<std::pair<RankedList, RankedList>>& pooled) {
  std::vector<double> x, y;
  for (const auto& [system, user] : pooled) {
    for (const auto& item : system.items) {
      auto u = user.rank_of(item.recipe_id);
      if (!u) throw ValidationError("ppmcc", fmt::format("recipe '{}' missing from the user ranking", item.recipe_id));
      x.push_back(item.rank);
      y.push_back(*u);
    }
  }
  return ppmcc(x, y);
}

NdpmCounts ndpm_counts(const RankedList& system, const RankedList& user) {
  NdpmCounts c;
  const auto& items = user.items;
  std::vector<double> sys(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto r = system.rank_of(items[i].recipe_id);
    if (!r) throw ValidationError("ndpm", fmt::format("recipe '{}' missing from the system ranking", items[i].recipe_id));
    sys[i] = *r;
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      double du = items[i].rank - items[j].rank;
      if (du == 0.0) continue;
      ++c.user_ordered_pairs;
      double ds = sys[i] - sys[j];
      if (ds == 0.0) ++c.system_tied;
      else if ((ds > 0) != (du > 0)) ++c.contradicted;
    }
  }
  return c;
}

MetricValue ndpm(const RankedList& system, const RankedList& user) {
  auto c = ndpm_counts(system, user);
  if (c.user_ordered_pairs == 0) return {std::nullopt, "user ties every pair"};
  return {(2.0 * static_cast<double>(c.contradicted) + static_cast<double>(c.system_tied)) /
              (2.0 * static_cast<double>(c.user_ordered_pairs)),
          ""};
}

HealthIndex health_index(const Catalog& catalog) {
  HealthIndex out;
  for (const auto& r : catalog.recipes) {
    auto s = enrich(catalog, r, 0.0);
    out[r.id] = {s.who_score, s.fsa.score};
  }
  return out;
}

namespace {

RateMetric rate_of(const std::vector<SessionRecord>& sessions, const HealthIndex& health, int threshold,
                   const std::optional<std::string> SessionRecord::*field, std::string_view what) {
  RateMetric m;
  std::size_t hits = 0;
  for (const auto& s : sessions) {
    const auto& target = s.*field;
    if (!target) {
      ++m.excluded;
      continue;
    }
    auto it = health.find(*target);
    if (it == health.end()) {
      ++m.excluded;
      continue;
    }
    ++m.included;
    if (it->second.who_score >= threshold) ++hits;
  }
  if (m.included == 0) {
    m.value = {std::nullopt, fmt::format("no sessions with a {}", what)};
  } else {
    m.value = {static_cast<double>(hits) / static_cast<double>(m.included), ""};
  }
  return m;
}

MetricValue mean_of(const std::vector<double>& v, std::string_view reason) {
  if (v.empty()) return {std::nullopt, std::string(reason)};
  return {std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()), ""};
}

}  // namespace

RateMetric cfcr(const std::vector<SessionRecord>& sessions, const HealthIndex& health, int healthy_threshold) {
  return rate_of(sessions, health, healthy_threshold, &SessionRecord::first_click, "click");
}

RateMetric chitr(const std::vector<SessionRecord>& sessions, const HealthIndex& health, int healthy_threshold) {
  return rate_of(sessions, health, healthy_threshold, &SessionRecord::pin, "pin");
}

const ScenarioMetrics& MetricReport::at(ScenarioKind k) const {
  for (const auto& s : scenarios) {
    if (s.scenario == k) return s;
  }
  throw ValidationError("scenario", fmt::format("no metrics for {}", to_string(k)));
}

MetricReport compute_report(const std::vector<SessionRecord>& sessions, const HealthIndex& health,
                            const MetricOptions& options) {
  MetricReport report;
  report.options = options;
  for (auto kind : kAllScenarios) {
    ScenarioMetrics m;
    m.scenario = kind;
    std::vector<SessionRecord> mine;
    for (const auto& s : sessions) {
      if (s.scenario == kind) mine.push_back(s);
    }
    m.sessions = mine.size();

    std::vector<double> who_x, fsa_x, user_y, ndpm_who, ndpm_fsa;
    for (const auto& s : mine) {
      bool usable = s.recipe_ids.size() >= 2;
      for (const auto& id : s.recipe_ids) {
        if (!usable) break;
        usable = s.ratings.count(id) && health.count(id);
      }
      if (!usable) {
        ++m.unranked_sessions;
        continue;
      }
      ++m.ranked_sessions;
      std::vector<std::pair<std::string, int>> who, fsa;
      for (const auto& id : s.recipe_ids) {
        const auto& h = health.find(id)->second;
        who.emplace_back(id, h.who_score);
        fsa.emplace_back(id, h.fsa_score);
      }
      auto sys_who = system_rank(who, RankBasis::SystemWho, options.tie_rule);
      auto sys_fsa = system_rank(fsa, RankBasis::SystemFsa, options.tie_rule);
      auto usr = user_rank(s.recipe_ids, s.ratings, options.tie_rule);
      for (std::size_t i = 0; i < s.recipe_ids.size(); ++i) {
        who_x.push_back(sys_who.items[i].rank);
        fsa_x.push_back(sys_fsa.items[i].rank);
        user_y.push_back(usr.items[i].rank);
        m.scatter.push_back({s.participant_number, s.recipe_ids[i], who[i].second, fsa[i].second,
                             s.ratings.at(s.recipe_ids[i]), sys_who.items[i].rank, sys_fsa.items[i].rank,
                             usr.items[i].rank});
      }
      auto nw = ndpm(sys_who, usr);
      auto nf = ndpm(sys_fsa, usr);
      if (nw.defined()) ndpm_who.push_back(*nw.value);
      else ++m.ndpm_undefined_sessions;
      if (nf.defined()) ndpm_fsa.push_back(*nf.value);
    }
    m.ppmcc_who = ppmcc(who_x, user_y);
    m.ppmcc_fsa = ppmcc(fsa_x, user_y);
    m.ndpm_who = mean_of(ndpm_who, "no session with a user-ordered pair");
    m.ndpm_fsa = mean_of(ndpm_fsa, "no session with a user-ordered pair");
    m.cfcr = cfcr(mine, health, options.healthy_threshold);
    m.chitr = chitr(mine, health, options.healthy_threshold);
    report.scenarios.push_back(std::move(m));
  }
  return report;
}

nlohmann::json to_json(const MetricValue& m) {
  if (m.value) return {{"value", *m.value}, {"defined", true}};
  return {{"value", nullptr}, {"defined", false}, {"reason", m.reason}};
}

namespace {

nlohmann::json to_json(const RateMetric& r) {
  auto j = to_json(r.value);
  j["included_sessions"] = r.included;
  j["excluded_sessions"] = r.excluded;
  return j;
}

std::string cell(const MetricValue& m) { return m.value ? fmt::format("{:.4f}", *m.value) : "undef"; }

}  // namespace

nlohmann::json to_json(const MetricReport& r) {
  nlohmann::json scenarios = nlohmann::json::array();
  for (const auto& s : r.scenarios) {
    scenarios.push_back({{"scenario", to_string(s.scenario)},
                         {"sessions", s.sessions},
                         {"ranked_sessions", s.ranked_sessions},
                         {"unranked_sessions", s.unranked_sessions},
                         {"ppmcc_who", to_json(s.ppmcc_who)},
                         {"ppmcc_fsa", to_json(s.ppmcc_fsa)},
                         {"ndpm_who", to_json(s.ndpm_who)},
                         {"ndpm_fsa", to_json(s.ndpm_fsa)},
                         {"ndpm_undefined_sessions", s.ndpm_undefined_sessions},
                         {"cfcr", to_json(s.cfcr)},
                         {"chitr", to_json(s.chitr)}});
  }
  return {{"tie_rule", to_string(r.options.tie_rule)},
          {"healthy_threshold", r.options.healthy_threshold},
          {"malformed_lines", r.malformed_lines},
          {"scenarios", scenarios}};
}

std::string format_report_table(const MetricReport& r) {
  std::string out = fmt::format("{:<18} {:>8} {:>10} {:>10} {:>10} {:>10} {:>8} {:>8}\n", "scenario", "sessions",
                                "ppmcc_who", "ppmcc_fsa", "ndpm_who", "ndpm_fsa", "cfcr", "chitr");
  for (const auto& s : r.scenarios) {
    out += fmt::format("{:<18} {:>8} {:>10} {:>10} {:>10} {:>10} {:>8} {:>8}\n", to_string(s.scenario), s.sessions,
                       cell(s.ppmcc_who), cell(s.ppmcc_fsa), cell(s.ndpm_who), cell(s.ndpm_fsa), cell(s.cfcr.value),
                       cell(s.chitr.value));
  }
  if (r.malformed_lines > 0) out += fmt::format("skipped {} malformed log line(s)\n", r.malformed_lines);
  return out;
}

void write_scatter_csv(std::ostream& out, const MetricReport& r) {
  out << "scenario,participant_number,recipe_id,who_score,fsa_score,rating,system_rank_who,system_rank_fsa,user_rank\n";
  for (const auto& s : r.scenarios) {
    for (const auto& p : s.scatter) {
      out << fmt::format("{},{},{},{},{},{},{},{},{}\n", to_string(s.scenario), p.participant_number, p.recipe_id,
                         p.who_score, p.fsa_score, p.rating, p.system_rank_who, p.system_rank_fsa, p.user_rank);
    }
  }
}

}  // namespace nudge
