// nudgectl: headless front end to the nudge engine.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nudge/corpus.hpp"
#include "nudge/error.hpp"
#include "nudge/food_type.hpp"
#include "nudge/health_profile.hpp"
#include "nudge/http_server.hpp"
#include "nudge/metrics.hpp"
#include "nudge/overrides.hpp"
#include "nudge/portion.hpp"
#include "nudge/recommender.hpp"
#include "nudge/reports.hpp"
#include "nudge/service.hpp"
#include "nudge/simulation.hpp"
#include "nudge/study.hpp"

namespace {

using namespace nudge;

struct Common {
  std::string config_path;
  std::string share_table_path;
  std::optional<double> fibre_threshold;
  std::string topics_path;
  std::string associations_path;
};

struct HealthArgs {
  double age = 0.0;
  double weight = 0.0;
  double height = 0.0;
  std::string gender;
  std::string activity;
  int meals = 3;
  std::string input_path;
};

EngineConfig engine_config(const Common& c) {
  EngineConfig cfg;
  if (!c.config_path.empty()) cfg = load_overrides(c.config_path, cfg);
  if (!c.share_table_path.empty()) cfg.shares = load_share_overrides(c.share_table_path, cfg.shares);
  if (c.fibre_threshold) {
    if (!(*c.fibre_threshold > 0.0)) throw ConfigError("--fibre-threshold must be positive");
    cfg.fsa.fibre_threshold_g_per_100g = *c.fibre_threshold;
  }
  return cfg;
}

int report_rejected(const CorpusLoadResult& corpus) {
  for (const auto& r : corpus.rejected) {
    std::cerr << fmt::format("rejected line {} ({}): {}\n", r.line, r.id.empty() ? "no id" : r.id, r.reason);
  }
  return corpus.rejected.empty() ? 0 : 1;
}

Catalog load_catalog(const std::string& corpus_path, const Common& c, const EngineConfig& cfg, int& status) {
  auto corpus = load_corpus(corpus_path);
  status = report_rejected(corpus);
  TopicTable topics = c.topics_path.empty() ? default_topic_table() : load_topic_table(c.topics_path);
  AssociationMatrix assoc;
  if (!c.associations_path.empty()) assoc = load_associations(c.associations_path, topics.size());
  std::vector<ExcludedRecipe> excluded;
  auto catalog = build_catalog(std::move(corpus.recipes), std::move(assoc), &excluded);
  for (const auto& e : excluded) std::cerr << fmt::format("excluded {}: {}\n", e.id, e.reason);
  catalog.topics = std::move(topics);
  catalog.who_goals = cfg.who;
  catalog.fsa = cfg.fsa;
  return catalog;
}

UserHealthInput health_input(const HealthArgs& a) {
  if (!a.input_path.empty()) {
    std::ifstream in(a.input_path);
    if (!in) throw LoadError(fmt::format("cannot open '{}'", a.input_path));
    return health_input_from_json(nlohmann::json::parse(in));
  }
  UserHealthInput in;
  in.age_years = a.age;
  in.weight_kg = a.weight;
  in.height_m = a.height;
  in.gender = parse_gender(a.gender);
  in.activity = parse_activity(a.activity);
  in.meals_per_day = a.meals;
  return in;
}

void add_health_options(CLI::App* cmd, HealthArgs& a) {
  cmd->add_option("--age", a.age, "Age in years");
  cmd->add_option("--weight", a.weight, "Weight in kg");
  cmd->add_option("--height", a.height, "Height in metres");
  cmd->add_option("--gender", a.gender, "male, female or other");
  cmd->add_option("--activity", a.activity, "sedentary, moderately_active, very_active or intensely_active");
  cmd->add_option("--meals", a.meals, "Meals per day (2 or 3)");
  cmd->add_option("--input", a.input_path, "JSON health record instead of the individual flags");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw LoadError(fmt::format("cannot write '{}'", path));
  out << text;
}

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nudgectl - health-aware recipe recommendation and nudging engine"};
  app.require_subcommand(1, 1);

  Common common;
  app.add_option("--config", common.config_path, "JSON threshold overrides (WHO goals, FSA bands, epochs)");
  app.add_option("--share-table", common.share_table_path, "CSV calorie-share overrides: meals,food_type,percent");
  app.add_option("--fibre-threshold", common.fibre_threshold, "Fibre grams per 100 g for the fibre flag");
  app.add_option("--topics", common.topics_path, "Topic table TSV");
  app.add_option("--associations", common.associations_path, "Recipe-topic association CSV");

  // score
  auto* score = app.add_subcommand("score", "WHO and FSA score distribution of a corpus");
  std::string corpus_path;
  std::string json_out;
  score->add_option("--corpus", corpus_path, "Recipe corpus (JSONL)")->required();
  score->add_option("--json", json_out, "Also write the table as JSON");

  // profile
  auto* profile = app.add_subcommand("profile", "BMR, DCI, BMI, DRCI and per-food-type calorie targets");
  HealthArgs health;
  add_health_options(profile, health);
  profile->add_option("--json", json_out, "Also write the profile as JSON");

  // portion
  auto* portion = app.add_subcommand("portion", "Portion recommendation for one recipe");
  HealthArgs portion_health;
  std::string recipe_id;
  add_health_options(portion, portion_health);
  portion->add_option("--corpus", corpus_path, "Recipe corpus (JSONL)")->required();
  portion->add_option("--recipe", recipe_id, "Recipe id")->required();

  // foodtype
  auto* foodtype = app.add_subcommand("foodtype", "Predicted food type per recipe");
  foodtype->add_option("--corpus", corpus_path, "Recipe corpus (JSONL)")->required();
  foodtype->add_option("--recipe", recipe_id, "Only this recipe");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "PPMCC, NDPM, CFCR and CHITR per scenario from an event log");
  std::string log_path;
  std::string scatter_path;
  std::string tie_rule = "ceiling";
  metrics->add_option("--log", log_path, "Event log (JSONL)")->required();
  metrics->add_option("--corpus", corpus_path, "Recipe corpus the log refers to")->required();
  metrics->add_option("--out", json_out, "Write the report as JSON");
  metrics->add_option("--scatter", scatter_path, "Write per-recipe rank pairs as CSV");
  metrics->add_option("--tie-rule", tie_rule, "ceiling, floor or fractional");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run simulated participants through the study");
  SimulationOptions sim;
  SyntheticCorpusOptions synth;
  std::string rater;
  RaterLogOptions rater_opt;
  std::string out_log;
  std::string out_corpus;
  simulate->add_option("--participants", sim.participants, "Simulated participants");
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--nudge-weight", sim.nudge_weight, "WHO weight in nudged ratings");
  simulate->add_option("--noise", sim.noise_sd, "Rating noise standard deviation");
  simulate->add_option("--recipes", synth.recipes, "Size of the synthetic corpus");
  simulate->add_option("--rater", rater, "perfect, anti or random: write a rater log instead of a full study");
  simulate->add_option("--sessions", rater_opt.sessions, "Sessions in a rater log");
  simulate->add_option("--list-size", rater_opt.list_size, "Recipes per session in a rater log");
  simulate->add_option("--out-log", out_log, "Write the event log here");
  simulate->add_option("--out-corpus", out_corpus, "Write the synthetic corpus here");
  simulate->add_option("--out", json_out, "Write the metric report as JSON");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the study HTTP API");
  std::string host = "127.0.0.1";
  int port = 8080;
  ServiceOptions service_opt;
  std::string event_log;
  std::string snapshot;
  serve->add_option("--corpus", corpus_path, "Recipe corpus (JSONL)")->required();
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks a free one)");
  serve->add_option("--admin-token", service_opt.admin_token, "Token for the admin export endpoints");
  serve->add_option("--event-log", event_log, "Append-only event log");
  serve->add_option("--snapshot", snapshot, "Participant snapshot");

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = engine_config(common);

    if (*score) {
      auto corpus = load_corpus(corpus_path);
      int status = report_rejected(corpus);
      auto dist = score_distribution(corpus.recipes, cfg);
      std::cout << format_distribution(dist);
      if (!json_out.empty()) write_text(json_out, to_json(dist).dump(2) + "\n");
      return status;
    }

    if (*profile) {
      auto in = health_input(health);
      auto p = drci(in);
      auto targets = target_table(p, in.meals_per_day, cfg.shares);
      std::cout << format_profile(in, p, targets);
      if (!json_out.empty()) {
        auto j = to_json(p);
        j["input"] = to_json(in);
        for (const auto& t : targets) j["targets"][std::string(to_string(t.food_type))] = t.target_kcal;
        write_text(json_out, j.dump(2) + "\n");
      }
      return 0;
    }

    if (*portion) {
      int status = 0;
      auto catalog = load_catalog(corpus_path, common, cfg, status);
      const Recipe* r = catalog.find(recipe_id);
      if (!r) throw ValidationError("recipe", fmt::format("recipe '{}' not found", recipe_id));
      auto in = health_input(portion_health);
      auto p = drci(in);
      auto [type, fallback] = classify(catalog, *r);
      double target = target_calories(p, type, in.meals_per_day, cfg.shares);
      auto rec = portion_size(target, *r, type);
      std::cout << fmt::format("recipe           {} ({})\n", r->id, r->title);
      std::cout << fmt::format("food type        {}{}\n", to_string(type), fallback ? " (no topic signal, default)" : "");
      std::cout << fmt::format("DRCI             {:.2f} kcal/day\n", p.drci_kcal);
      std::cout << fmt::format("target           {:.2f} kcal\n", rec.target_kcal);
      std::cout << fmt::format("calories         {:.2f} kcal per portion\n", rec.calories_per_portion);
      std::cout << fmt::format("portions         {}\n", format_portions(rec.portions));
      std::cout << fmt::format("fits             {}\n", rec.fits ? "yes" : "no");
      std::cout << rec.explanation << "\n";
      return status;
    }

    if (*foodtype) {
      int status = 0;
      auto catalog = load_catalog(corpus_path, common, cfg, status);
      std::cout << fmt::format("{:<16} {:<10} {:>8} {:>8} {:>8} {:>8} {:>8}\n", "recipe", "type", "meal", "side",
                               "snack", "drink", "brkfst");
      for (const auto& r : catalog.recipes) {
        if (!recipe_id.empty() && r.id != recipe_id) continue;
        auto [type, fallback] = classify(catalog, r);
        std::array<double, kFoodTypeCount> sums{};
        if (const auto* a = catalog.associations_for(r.id)) sums = food_type_scores(*a, catalog.topics);
        std::cout << fmt::format("{:<16} {:<10} {:>8.3f} {:>8.3f} {:>8.3f} {:>8.3f} {:>8.3f}{}\n", r.id,
                                 to_string(type), sums[0], sums[1], sums[2], sums[3], sums[4],
                                 fallback ? "  (no topic signal)" : "");
      }
      return status;
    }

    if (*metrics) {
      int status = 0;
      auto catalog = load_catalog(corpus_path, common, cfg, status);
      auto log = load_event_log(log_path);
      MetricOptions mo;
      mo.tie_rule = parse_tie_rule(tie_rule);
      auto report = compute_report(collect_sessions(log.events), health_index(catalog), mo);
      report.malformed_lines = log.malformed;
      std::cout << format_report_table(report);
      if (!json_out.empty()) write_text(json_out, to_json(report).dump(2) + "\n");
      if (!scatter_path.empty()) {
        std::ofstream out(scatter_path);
        if (!out) throw LoadError(fmt::format("cannot write '{}'", scatter_path));
        write_scatter_csv(out, report);
      }
      return status;
    }

    if (*simulate) {
      synth.seed = sim.seed;
      auto corpus = generate_corpus(synth);
      auto catalog = build_catalog(corpus.recipes, corpus.associations);
      catalog.who_goals = cfg.who;
      catalog.fsa = cfg.fsa;
      if (!out_corpus.empty()) {
        std::ofstream out(out_corpus);
        if (!out) throw LoadError(fmt::format("cannot write '{}'", out_corpus));
        write_corpus(out, corpus.recipes);
      }
      std::vector<SessionEvent> events;
      MetricReport report;
      if (!rater.empty()) {
        rater_opt.mode = parse_rater_mode(rater);
        rater_opt.seed = sim.seed;
        auto health_idx = health_index(catalog);
        events = synthetic_rater_log(health_idx, rater_opt);
        report = compute_report(collect_sessions(events), health_idx);
      } else {
        auto result = run_simulation(catalog, corpus.vocabulary, corpus.dishes, sim);
        std::cout << fmt::format("participants {} (completed {}), {} events, {:.2f} s\n", result.participants,
                                 result.completed, result.events.size(), result.seconds);
        events = std::move(result.events);
        report = std::move(result.report);
      }
      std::cout << format_report_table(report);
      if (!out_log.empty()) {
        std::ofstream out(out_log);
        if (!out) throw LoadError(fmt::format("cannot write '{}'", out_log));
        write_event_log(out, events);
      }
      if (!json_out.empty()) write_text(json_out, to_json(report).dump(2) + "\n");
      return 0;
    }

    if (*serve) {
      int status = 0;
      auto catalog = load_catalog(corpus_path, common, cfg, status);
      service_opt.shares = cfg.shares;
      service_opt.event_log_path = event_log;
      service_opt.snapshot_path = snapshot;
      Service service(std::move(catalog), service_opt);
      HttpServer server(service);
      int bound = server.bind(host, port);
      if (bound < 0) throw LoadError(fmt::format("cannot bind {}:{}", host, port));
      std::cout << fmt::format("listening on http://{}:{}\n", host, bound) << std::flush;
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.listen();
      g_server = nullptr;
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << (e.field().empty() ? "" : e.field() + ": ") << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
