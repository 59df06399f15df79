#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "nudge/metrics.hpp"
#include "nudge/nudges.hpp"
#include "nudge/overrides.hpp"
#include "nudge/recommender.hpp"
#include "nudge/study.hpp"

namespace nudge {

inline constexpr std::string_view kApiVersion = "v1";

struct ApiRequest {
  std::string method;  // "GET" or "POST"
  std::string path;    // e.g. "/v1/recommend"
  std::string token;   // bearer token, empty when absent
  nlohmann::json body = nlohmann::json::object();
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body = nlohmann::json::object();
};

struct ServiceOptions {
  std::string admin_token;
  PseudoNames names;
  CalorieShareTable shares = default_share_table();
  ScorerOptions scorer;
  MetricOptions metrics;
  // Append-only event log and participant snapshot. Both empty keeps the
  // study in memory only; existing files are replayed on start.
  std::filesystem::path event_log_path;
  std::filesystem::path snapshot_path;
  std::function<std::int64_t()> clock;  // epoch ms; defaults to the system clock
  std::function<std::string()> token_source;  // defaults to 128 random bits in hex
};

/// The study API as plain JSON handlers. Errors come back as
/// {"error": {"code", "message", "fields": {name: message}}}.
///
///   POST /v1/signup                  {health, liked, disliked, topic_affinity?, consent}
///   POST /v1/login                   {user_id, participant_number}
///   GET  /v1/sequence
///   POST /v1/recommend               {scenario, query}
///   POST /v1/event                   {scenario, recipe_id, event, value?, timestamp_ms?}
///   GET  /v1/completion
///   POST /v1/questionnaire/start
///   POST /v1/questionnaire           {scenario, effectiveness, understandability, persuasiveness, long_term}
///   GET  /v1/admin/export/log        admin token
///   GET  /v1/admin/export/metrics    admin token
class Service {
 public:
  Service(Catalog catalog, ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  ApiResponse handle(const ApiRequest& request);

  ApiResponse signup(const nlohmann::json& body);
  ApiResponse login(const nlohmann::json& body);
  ApiResponse sequence(const std::string& token);
  ApiResponse recommend(const std::string& token, const nlohmann::json& body);
  ApiResponse event(const std::string& token, const nlohmann::json& body);
  ApiResponse completion(const std::string& token);
  ApiResponse questionnaire_start(const std::string& token);
  ApiResponse questionnaire(const std::string& token, const nlohmann::json& body);
  ApiResponse export_log(const std::string& token);
  ApiResponse export_metrics(const std::string& token);

  const StudyStore& store() const { return store_; }
  const Catalog& catalog() const { return catalog_; }

 private:
  std::optional<std::string> participant_for(const std::string& token) const;
  std::int64_t now() const;
  nlohmann::json reclist_payload(const Participant& p, ScenarioKind scenario, const Session& session,
                                 bool revisit) const;
  std::vector<ScoredRecipe> recommend_recipes(const TasteProfile& taste, std::string_view query) const;

  Catalog catalog_;
  ServiceOptions options_;
  HealthIndex health_;
  StudyStore store_;
  mutable std::mutex tokens_mutex_;
  std::map<std::string, std::string> tokens_;  // token -> participant number
  std::mutex signup_mutex_;
  std::unique_ptr<std::ofstream> log_out_;
};

ApiResponse error_response(int status, std::string_view code, std::string_view message,
                           const std::map<std::string, std::string>& fields = {});

}  // namespace nudge
