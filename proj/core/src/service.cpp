#include "nudge/service.hpp"

#include <chrono>
#include <cstdio>

#include <fmt/format.h>
#include <sodium.h>

#include "nudge/error.hpp"
#include "nudge/portion.hpp"

namespace nudge {

namespace {

std::string random_hex_token() {
  static const bool ready = sodium_init() >= 0;
  if (!ready) throw Error("libsodium failed to initialise");
  unsigned char bytes[16];
  randombytes_buf(bytes, sizeof bytes);
  char hex[sizeof bytes * 2 + 1];
  sodium_bin2hex(hex, sizeof hex, bytes, sizeof bytes);
  return hex;
}

std::int64_t system_now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

ApiResponse unauthorized() { return error_response(401, "unauthorized", "missing or unknown token"); }

template <typename F>
ApiResponse guarded(F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    std::map<std::string, std::string> fields;
    if (!e.field().empty()) fields[e.field()] = e.what();
    return error_response(422, "validation", e.what(), fields);
  } catch (const OutOfModelError& e) {
    return error_response(422, "out_of_model", e.what(), {{"age_years", e.what()}});
  } catch (const ProtocolError& e) {
    return error_response(409, "protocol", e.what());
  } catch (const Error& e) {
    return error_response(400, "bad_request", e.what());
  } catch (const nlohmann::json::exception& e) {
    return error_response(400, "bad_request", e.what());
  }
}

std::string string_field(const nlohmann::json& body, const char* name) {
  if (!body.is_object() || !body.contains(name) || !body.at(name).is_string()) {
    throw ValidationError(name, fmt::format("missing required field: {}", name));
  }
  return body.at(name).get<std::string>();
}

std::vector<std::string> string_list(const nlohmann::json& body, const char* name) {
  if (!body.contains(name)) return {};
  const auto& v = body.at(name);
  if (!v.is_array()) throw ValidationError(name, fmt::format("{} must be a list of strings", name));
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) throw ValidationError(name, fmt::format("{} must be a list of strings", name));
    out.push_back(x.get<std::string>());
  }
  return out;
}

}  // namespace

ApiResponse error_response(int status, std::string_view code, std::string_view message,
                           const std::map<std::string, std::string>& fields) {
  nlohmann::json f = nlohmann::json::object();
  for (const auto& [k, v] : fields) f[k] = v;
  return {status, {{"error", {{"code", code}, {"message", message}, {"fields", f}}}}};
}

Service::Service(Catalog catalog, ServiceOptions options)
    : catalog_(std::move(catalog)),
      options_(std::move(options)),
      store_([this](const SessionEvent& e) {
        if (log_out_) {
          *log_out_ << to_json(e).dump() << '\n';
          log_out_->flush();
        }
      }) {
  if (!options_.clock) options_.clock = system_now_ms;
  if (!options_.token_source) options_.token_source = random_hex_token;
  catalog_.reindex();
  health_ = health_index(catalog_);

  if (!options_.snapshot_path.empty() && std::filesystem::exists(options_.snapshot_path)) {
    std::ifstream in(options_.snapshot_path);
    nlohmann::json snap;
    try {
      snap = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(fmt::format("snapshot '{}' is not valid JSON: {}", options_.snapshot_path.string(), e.what()));
    }
    std::vector<SessionEvent> events;
    if (!options_.event_log_path.empty() && std::filesystem::exists(options_.event_log_path)) {
      auto log = load_event_log(options_.event_log_path);
      if (log.malformed > 0) {
        throw LoadError(fmt::format("event log '{}' has {} malformed line(s)", options_.event_log_path.string(),
                                    log.malformed));
      }
      events = std::move(log.events);
    }
    store_.restore(snap, events);
  }
  if (!options_.event_log_path.empty()) {
    log_out_ = std::make_unique<std::ofstream>(options_.event_log_path, std::ios::app);
    if (!*log_out_) throw LoadError(fmt::format("cannot open event log '{}'", options_.event_log_path.string()));
  }
}

Service::~Service() = default;

std::int64_t Service::now() const { return options_.clock(); }

std::optional<std::string> Service::participant_for(const std::string& token) const {
  std::lock_guard lock(tokens_mutex_);
  auto it = tokens_.find(token);
  if (it == tokens_.end()) return std::nullopt;
  return it->second;
}

ApiResponse Service::handle(const ApiRequest& r) {
  const auto& p = r.path;
  if (r.method == "POST") {
    if (p == "/v1/signup") return signup(r.body);
    if (p == "/v1/login") return login(r.body);
    if (p == "/v1/recommend") return recommend(r.token, r.body);
    if (p == "/v1/event") return event(r.token, r.body);
    if (p == "/v1/questionnaire/start") return questionnaire_start(r.token);
    if (p == "/v1/questionnaire") return questionnaire(r.token, r.body);
  } else if (r.method == "GET") {
    if (p == "/v1/sequence") return sequence(r.token);
    if (p == "/v1/completion") return completion(r.token);
    if (p == "/v1/admin/export/log") return export_log(r.token);
    if (p == "/v1/admin/export/metrics") return export_metrics(r.token);
  }
  return error_response(404, "not_found", fmt::format("no route for {} {}", r.method, p));
}

ApiResponse Service::signup(const nlohmann::json& body) {
  return guarded([&]() -> ApiResponse {
    if (!body.is_object()) throw ValidationError("body", "request body must be an object");
    std::map<std::string, std::string> fields;
    RegistrationInput in;
    in.consent = body.contains("consent") && body.at("consent").is_boolean() && body.at("consent").get<bool>();
    if (!in.consent) fields["consent"] = "consent is required";
    try {
      if (!body.contains("health")) throw ValidationError("health", "missing required field: health");
      in.health = health_input_from_json(body.at("health"));
      drci(in.health);
    } catch (const ValidationError& e) {
      fields[e.field().empty() ? "health" : e.field()] = e.what();
    } catch (const OutOfModelError& e) {
      fields["age_years"] = e.what();
    }
    try {
      in.liked = string_list(body, "liked");
      in.disliked = string_list(body, "disliked");
      if (body.contains("topic_affinity")) in.topic_affinity = body.at("topic_affinity").get<std::vector<double>>();
      build_taste_profile(in.liked, in.disliked, in.topic_affinity, catalog_.topics.size());
    } catch (const ValidationError& e) {
      fields[e.field().empty() ? "taste" : e.field()] = e.what();
    } catch (const nlohmann::json::exception&) {
      fields["topic_affinity"] = "topic_affinity must be a list of numbers";
    }
    if (!fields.empty()) return error_response(422, "validation", "sign-up rejected", fields);

    std::lock_guard lock(signup_mutex_);
    auto user_id = options_.token_source();
    const auto participant = store_.register_participant(in, user_id);
    if (!options_.snapshot_path.empty()) {
      auto tmp = options_.snapshot_path;
      tmp += ".tmp";
      {
        std::ofstream out(tmp, std::ios::trunc);
        out << store_.snapshot().dump(2) << '\n';
        if (!out) throw LoadError(fmt::format("cannot write snapshot '{}'", tmp.string()));
      }
      std::filesystem::rename(tmp, options_.snapshot_path);
    }
    auto token = options_.token_source();
    {
      std::lock_guard tlock(tokens_mutex_);
      tokens_[token] = participant.participant_number;
    }
    nlohmann::json seq = nlohmann::json::array();
    for (auto k : participant.sequence) seq.push_back(options_.names.name_of(k));
    return {201,
            {{"participant_number", participant.participant_number},
             {"user_id", participant.user_id},
             {"token", token},
             {"sequence", seq},
             {"profile", to_json(participant.profile)}}};
  });
}

ApiResponse Service::login(const nlohmann::json& body) {
  return guarded([&]() -> ApiResponse {
    auto user_id = string_field(body, "user_id");
    auto pn = string_field(body, "participant_number");
    auto p = store_.find_by_user(user_id, pn);
    if (!p) return error_response(401, "unauthorized", "unknown user_id / participant_number pair");
    auto token = options_.token_source();
    std::lock_guard lock(tokens_mutex_);
    tokens_[token] = pn;
    return {200, {{"participant_number", pn}, {"token", token}}};
  });
}

ApiResponse Service::sequence(const std::string& token) {
  return guarded([&]() -> ApiResponse {
    auto pn = participant_for(token);
    if (!pn) return unauthorized();
    auto p = store_.participant(*pn);
    auto opened = store_.opened_count(*pn);
    nlohmann::json seq = nlohmann::json::array();
    for (std::size_t i = 0; i < p->sequence.size(); ++i) {
      seq.push_back({{"list", options_.names.name_of(p->sequence[i])}, {"position", i + 1}, {"opened", i < opened}});
    }
    return {200,
            {{"participant_number", *pn},
             {"sequence", seq},
             {"next_position", std::min(opened + 1, kScenarioCount)},
             {"questionnaire", store_.in_questionnaire(*pn)}}};
  });
}

nlohmann::json Service::reclist_payload(const Participant& p, ScenarioKind scenario, const Session& session,
                                        bool revisit) const {
  nlohmann::json items = nlohmann::json::array();
  for (std::size_t i = 0; i < session.recipe_ids.size(); ++i) {
    const auto& id = session.recipe_ids[i];
    const Recipe* recipe = catalog_.find(id);
    if (!recipe) throw LoadError(fmt::format("served recipe '{}' is no longer in the catalog", id));
    auto scored = enrich(catalog_, *recipe,
                         score_recipe(p.taste, *recipe, catalog_.associations_for(id), options_.scorer));
    double target = target_calories(p.profile, scored.food_type, p.health.meals_per_day, options_.shares);
    auto portion = portion_size(target, *recipe, scored.food_type);
    nlohmann::json item = {{"position", i + 1},
                           {"recipe_id", id},
                           {"title", recipe->title},
                           {"image_ref", recipe->image_ref},
                           {"badge", to_json(build_badge(scenario, scored))},
                           {"widget", to_json(build_widget(scenario, p.profile, scored, portion, catalog_.fsa))},
                           {"rating", nullptr},
                           {"pinned", session.pin && *session.pin == id}};
    if (auto r = session.ratings.find(id); r != session.ratings.end()) item["rating"] = r->second;
    items.push_back(std::move(item));
  }
  return {{"list", options_.names.name_of(scenario)},
          {"scenario", to_string(scenario)},
          {"position", session.position + 1},
          {"revisit", revisit},
          {"frozen", store_.in_questionnaire(p.participant_number)},
          {"items", items}};
}

ApiResponse Service::recommend(const std::string& token, const nlohmann::json& body) {
  return guarded([&]() -> ApiResponse {
    auto pn = participant_for(token);
    if (!pn) return unauthorized();
    auto name = string_field(body, "scenario");
    auto scenario = options_.names.resolve(name);
    if (!scenario) throw ValidationError("scenario", fmt::format("unknown list '{}'", name));
    auto query = body.contains("query") && body.at("query").is_string() ? body.at("query").get<std::string>() : "";
    auto p = store_.participant(*pn);

    if (store_.session(*pn, *scenario)) {
      auto s = store_.open_session(*pn, *scenario, {}, now());
      return {200, reclist_payload(*p, *scenario, s, true)};
    }
    if (store_.in_questionnaire(*pn)) throw ProtocolError("no new scenarios once the questionnaire has started");
    auto pos = static_cast<std::size_t>(std::find(p->sequence.begin(), p->sequence.end(), *scenario) -
                                        p->sequence.begin());
    auto opened = store_.opened_count(*pn);
    if (pos != opened) {
      throw ProtocolError(fmt::format("list {} is at position {}; open position {} first", name, pos + 1,
                                      opened + 1));
    }
    auto recs = recommend_recipes(p->taste, query);
    if (recs.size() < kRecListSize) {
      return error_response(422, "too_few_results",
                            fmt::format("query '{}' matched {} recipe(s); at least {} are needed", query,
                                        recs.size(), kRecListSize),
                            {{"query", "broaden the query"}});
    }
    std::vector<std::string> ids;
    for (const auto& r : recs) ids.push_back(r.recipe.id);
    auto s = store_.open_session(*pn, *scenario, ids, now());
    return {200, reclist_payload(*p, *scenario, s, false)};
  });
}

std::vector<ScoredRecipe> Service::recommend_recipes(const TasteProfile& taste, std::string_view query) const {
  return nudge::recommend(taste, catalog_, query, kRecListSize, options_.scorer);
}

ApiResponse Service::event(const std::string& token, const nlohmann::json& body) {
  return guarded([&]() -> ApiResponse {
    auto pn = participant_for(token);
    if (!pn) return unauthorized();
    auto name = string_field(body, "scenario");
    auto scenario = options_.names.resolve(name);
    if (!scenario) throw ValidationError("scenario", fmt::format("unknown list '{}'", name));
    SessionEvent e;
    e.participant_number = *pn;
    e.scenario = *scenario;
    e.recipe_id = string_field(body, "recipe_id");
    e.kind = parse_event_kind(string_field(body, "event"));
    if (body.contains("value") && !body.at("value").is_null()) {
      if (!body.at("value").is_number_integer()) throw ValidationError("value", "value must be an integer");
      e.value = body.at("value").get<int>();
    }
    e.timestamp_ms = body.contains("timestamp_ms") && body.at("timestamp_ms").is_number_integer()
                         ? body.at("timestamp_ms").get<std::int64_t>()
                         : now();
    store_.record_event(e);
    return {200, {{"accepted", true}, {"timestamp_ms", e.timestamp_ms}}};
  });
}

ApiResponse Service::completion(const std::string& token) {
  return guarded([&]() -> ApiResponse {
    auto pn = participant_for(token);
    if (!pn) return unauthorized();
    auto j = to_json(store_.validate_completion(*pn));
    for (auto& s : j["scenarios"]) {
      s["list"] = options_.names.name_of(parse_scenario(s["scenario"].get<std::string>()));
    }
    return {200, j};
  });
}

ApiResponse Service::questionnaire_start(const std::string& token) {
  return guarded([&]() -> ApiResponse {
    auto pn = participant_for(token);
    if (!pn) return unauthorized();
    store_.begin_questionnaire(*pn, now());
    return {200, {{"questionnaire", true}}};
  });
}

ApiResponse Service::questionnaire(const std::string& token, const nlohmann::json& body) {
  return guarded([&]() -> ApiResponse {
    auto pn = participant_for(token);
    if (!pn) return unauthorized();
    auto name = string_field(body, "scenario");
    auto scenario = options_.names.resolve(name);
    if (!scenario) throw ValidationError("scenario", fmt::format("unknown list '{}'", name));
    QuestionnaireResponse r;
    r.scenario = *scenario;
    std::map<std::string, std::string> fields;
    for (auto c : kAllCriteria) {
      std::string key(to_string(c));
      if (!body.contains(key) || !body.at(key).is_number_integer()) {
        fields[key] = "an integer answer in [1, 5] is required";
        continue;
      }
      r.ratings[static_cast<std::size_t>(c)] = body.at(key).get<int>();
    }
    if (!fields.empty()) return error_response(422, "validation", "incomplete questionnaire", fields);
    store_.submit_questionnaire(*pn, r, now());
    return {200, {{"accepted", true}}};
  });
}

ApiResponse Service::export_log(const std::string& token) {
  if (options_.admin_token.empty() || token != options_.admin_token) {
    return error_response(403, "forbidden", "admin token required");
  }
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : store_.events()) events.push_back(to_json(e));
  return {200, {{"events", events}}};
}

ApiResponse Service::export_metrics(const std::string& token) {
  if (options_.admin_token.empty() || token != options_.admin_token) {
    return error_response(403, "forbidden", "admin token required");
  }
  return guarded([&]() -> ApiResponse {
    auto report = compute_report(collect_sessions(store_.events()), health_, options_.metrics);
    return {200, to_json(report)};
  });
}

}  // namespace nudge
