#include "nudge/study.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <numeric>

#include <fmt/format.h>

#include "nudge/error.hpp"

namespace nudge {

ScenarioSequence assign_sequence(std::uint64_t participant_index) {
  ScenarioSequence seq = kAllScenarios;
  auto n = participant_index % kSequenceCount;
  for (std::uint64_t i = 0; i < n; ++i) std::next_permutation(seq.begin(), seq.end());
  return seq;
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Click: return "click";
    case EventKind::BrowseStart: return "browse_start";
    case EventKind::BrowseEnd: return "browse_end";
    case EventKind::Rate: return "rate";
    case EventKind::Pin: return "pin";
    case EventKind::Serve: return "serve";
    case EventKind::Visit: return "visit";
    case EventKind::QuestionnaireStart: return "questionnaire_start";
    case EventKind::Questionnaire: return "questionnaire";
  }
  return "click";
}

EventKind parse_event_kind(std::string_view s) {
  for (auto k : {EventKind::Click, EventKind::BrowseStart, EventKind::BrowseEnd, EventKind::Rate, EventKind::Pin,
                 EventKind::Serve, EventKind::Visit, EventKind::QuestionnaireStart, EventKind::Questionnaire}) {
    if (to_string(k) == s) return k;
  }
  throw ValidationError("event", fmt::format("unknown event kind '{}'", s));
}

bool is_client_event(EventKind k) {
  switch (k) {
    case EventKind::Click:
    case EventKind::BrowseStart:
    case EventKind::BrowseEnd:
    case EventKind::Rate:
    case EventKind::Pin:
      return true;
    default:
      return false;
  }
}

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::Effectiveness: return "effectiveness";
    case Criterion::Understandability: return "understandability";
    case Criterion::Persuasiveness: return "persuasiveness";
    case Criterion::LongTerm: return "long_term";
  }
  return "effectiveness";
}

Criterion parse_criterion(std::string_view s) {
  for (auto c : kAllCriteria) {
    if (to_string(c) == s) return c;
  }
  throw ValidationError("criterion", fmt::format("unknown questionnaire criterion '{}'", s));
}

nlohmann::json to_json(const SessionEvent& e) {
  nlohmann::json j = {{"participant_number", e.participant_number},
                      {"scenario", to_string(e.scenario)},
                      {"recipe_id", e.recipe_id},
                      {"event", to_string(e.kind)},
                      {"value", nullptr},
                      {"timestamp_ms", e.timestamp_ms}};
  if (e.value) j["value"] = *e.value;
  return j;
}

SessionEvent event_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("event", "event record must be an object");
  auto str = [&](const char* name) -> std::string {
    if (!j.contains(name) || !j.at(name).is_string()) {
      throw ValidationError(name, fmt::format("missing required field: {}", name));
    }
    return j.at(name).get<std::string>();
  };
  SessionEvent e;
  e.participant_number = str("participant_number");
  e.scenario = parse_scenario(str("scenario"));
  e.recipe_id = j.contains("recipe_id") && j.at("recipe_id").is_string() ? j.at("recipe_id").get<std::string>() : "";
  e.kind = parse_event_kind(str("event"));
  if (j.contains("value") && !j.at("value").is_null()) {
    if (!j.at("value").is_number_integer()) throw ValidationError("value", "value must be an integer");
    e.value = j.at("value").get<int>();
  }
  if (!j.contains("timestamp_ms") || !j.at("timestamp_ms").is_number_integer()) {
    throw ValidationError("timestamp_ms", "missing required field: timestamp_ms");
  }
  e.timestamp_ms = j.at("timestamp_ms").get<std::int64_t>();
  return e;
}

EventLog parse_event_log(std::istream& in) {
  EventLog log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      log.events.push_back(event_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception&) {
      ++log.malformed;
    } catch (const ValidationError&) {
      ++log.malformed;
    }
  }
  return log;
}

EventLog load_event_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(fmt::format("cannot open event log '{}'", path.string()));
  return parse_event_log(in);
}

void write_event_log(std::ostream& out, const std::vector<SessionEvent>& events) {
  for (const auto& e : events) out << to_json(e).dump() << '\n';
}

nlohmann::json to_json(const Participant& p) {
  nlohmann::json seq = nlohmann::json::array();
  for (auto k : p.sequence) seq.push_back(to_string(k));
  return {{"participant_number", p.participant_number},
          {"user_id", p.user_id},
          {"health", to_json(p.health)},
          {"liked", p.taste.liked_features},
          {"disliked", p.taste.disliked_features},
          {"topic_affinity", p.taste.topic_affinity},
          {"sequence_index", p.sequence_index},
          {"sequence", seq}};
}

Participant participant_from_json(const nlohmann::json& j) {
  try {
    Participant p;
    p.participant_number = j.at("participant_number").get<std::string>();
    p.user_id = j.at("user_id").get<std::string>();
    p.health = health_input_from_json(j.at("health"));
    p.profile = drci(p.health);
    p.taste.liked_features = j.at("liked").get<std::set<std::string>>();
    p.taste.disliked_features = j.at("disliked").get<std::set<std::string>>();
    p.taste.topic_affinity = j.at("topic_affinity").get<std::vector<double>>();
    p.sequence_index = j.at("sequence_index").get<std::uint64_t>();
    p.sequence = assign_sequence(p.sequence_index);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(fmt::format("malformed participant record: {}", e.what()));
  }
}

nlohmann::json to_json(const CompletionReport& r) {
  nlohmann::json scenarios = nlohmann::json::array();
  for (const auto& s : r.scenarios) {
    scenarios.push_back({{"scenario", to_string(s.scenario)},
                         {"opened", s.opened},
                         {"missing_ratings", s.missing_ratings},
                         {"unrated_recipe_ids", s.unrated_recipe_ids},
                         {"missing_pin", s.missing_pin}});
  }
  return {{"complete", r.complete}, {"ratings", r.ratings}, {"pins", r.pins}, {"scenarios", scenarios}};
}

// ---- StudyStore ----

const Participant& StudyStore::register_participant(const RegistrationInput& input, std::string user_id) {
  if (!input.consent) throw ValidationError("consent", "consent is required before any data is stored");
  if (user_id.empty()) throw ValidationError("user_id", "user_id must not be empty");
  Participant p;
  p.health = input.health;
  p.profile = drci(input.health);
  p.taste = build_taste_profile(input.liked, input.disliked, input.topic_affinity);
  p.user_id = std::move(user_id);

  std::unique_lock lock(mutex_);
  p.sequence_index = states_.size();
  p.sequence = assign_sequence(p.sequence_index);
  p.participant_number = fmt::format("P{:05d}", p.sequence_index + 1);
  for (const auto& [_, s] : states_) {
    if (s.participant.user_id == p.user_id) throw ValidationError("user_id", "user_id already registered");
  }
  auto [it, inserted] = states_.emplace(p.participant_number, State{});
  if (!inserted) throw ProtocolError("participant number collision");
  it->second.participant = std::move(p);
  return it->second.participant;
}

void StudyStore::restore_participant(Participant p) {
  std::unique_lock lock(mutex_);
  auto key = p.participant_number;
  State s;
  s.participant = std::move(p);
  if (!states_.emplace(key, std::move(s)).second) {
    throw LoadError(fmt::format("duplicate participant '{}'", key));
  }
}

std::optional<Participant> StudyStore::participant(std::string_view pn) const {
  std::shared_lock lock(mutex_);
  auto it = states_.find(pn);
  if (it == states_.end()) return std::nullopt;
  return it->second.participant;
}

std::optional<Participant> StudyStore::find_by_user(std::string_view user_id, std::string_view pn) const {
  std::shared_lock lock(mutex_);
  auto it = states_.find(pn);
  if (it == states_.end() || it->second.participant.user_id != user_id) return std::nullopt;
  return it->second.participant;
}

std::size_t StudyStore::participant_count() const {
  std::shared_lock lock(mutex_);
  return states_.size();
}

StudyStore::State& StudyStore::state_for(std::string_view pn) {
  auto it = states_.find(pn);
  if (it == states_.end()) throw ProtocolError(fmt::format("unknown participant '{}'", pn));
  return it->second;
}

const StudyStore::State& StudyStore::state_for(std::string_view pn) const {
  auto it = states_.find(pn);
  if (it == states_.end()) throw ProtocolError(fmt::format("unknown participant '{}'", pn));
  return it->second;
}

std::size_t StudyStore::opened_count(std::string_view pn) const {
  std::shared_lock lock(mutex_);
  return state_for(pn).sessions.size();
}

std::optional<Session> StudyStore::session(std::string_view pn, ScenarioKind scenario) const {
  std::shared_lock lock(mutex_);
  const auto& s = state_for(pn);
  auto it = s.sessions.find(scenario);
  if (it == s.sessions.end()) return std::nullopt;
  return it->second;
}

Session StudyStore::open_session(std::string_view pn, ScenarioKind scenario, const std::vector<std::string>& recipe_ids,
                                 std::int64_t timestamp_ms) {
  std::unique_lock lock(mutex_);
  auto& s = state_for(pn);
  auto it = s.sessions.find(scenario);
  if (it != s.sessions.end()) {
    apply_locked({std::string(pn), scenario, "", EventKind::Visit, std::nullopt, timestamp_ms});
    return s.sessions.at(scenario);
  }
  if (recipe_ids.size() != kRecListSize) {
    throw ProtocolError(fmt::format("a scenario session needs exactly {} recipes, got {}", kRecListSize,
                                    recipe_ids.size()));
  }
  std::set<std::string_view> unique(recipe_ids.begin(), recipe_ids.end());
  if (unique.size() != recipe_ids.size()) throw ProtocolError("recommendation list contains duplicate recipes");
  // Validate position before logging anything.
  auto pos = static_cast<std::size_t>(
      std::find(s.participant.sequence.begin(), s.participant.sequence.end(), scenario) -
      s.participant.sequence.begin());
  if (pos != s.sessions.size()) {
    throw ProtocolError(fmt::format("scenario {} is at position {} but {} scenario(s) are open", to_string(scenario),
                                    pos + 1, s.sessions.size()));
  }
  for (std::size_t i = 0; i < recipe_ids.size(); ++i) {
    apply_locked({std::string(pn), scenario, recipe_ids[i], EventKind::Serve, static_cast<int>(i + 1), timestamp_ms});
  }
  return s.sessions.at(scenario);
}

void StudyStore::record_event(const SessionEvent& event) {
  if (!is_client_event(event.kind)) {
    throw ValidationError("event", fmt::format("event kind '{}' cannot be submitted", to_string(event.kind)));
  }
  apply(event);
}

void StudyStore::apply(const SessionEvent& event) {
  std::unique_lock lock(mutex_);
  apply_locked(event);
}

void StudyStore::replay(const SessionEvent& event) {
  std::unique_lock lock(mutex_);
  auto sink = std::move(sink_);
  sink_ = nullptr;
  try {
    apply_locked(event);
  } catch (...) {
    sink_ = std::move(sink);
    throw;
  }
  sink_ = std::move(sink);
}

void StudyStore::apply_locked(const SessionEvent& e) {
  auto& st = state_for(e.participant_number);
  auto& participant = st.participant;

  auto session_or_throw = [&]() -> Session& {
    auto it = st.sessions.find(e.scenario);
    if (it == st.sessions.end()) {
      throw ProtocolError(fmt::format("no {} session for participant {}", to_string(e.scenario),
                                      e.participant_number));
    }
    return it->second;
  };
  auto require_listed = [&](const Session& s) {
    if (std::find(s.recipe_ids.begin(), s.recipe_ids.end(), e.recipe_id) == s.recipe_ids.end()) {
      throw ValidationError("recipe_id",
                            fmt::format("recipe '{}' is not in this scenario's list", e.recipe_id));
    }
  };
  auto require_unfrozen = [&](std::string_view what) {
    if (st.questionnaire_phase) {
      throw ProtocolError(fmt::format("{} cannot change once the questionnaire has started", what));
    }
  };

  switch (e.kind) {
    case EventKind::Serve: {
      if (!e.value || *e.value < 1) throw ValidationError("value", "serve records need a 1-based position");
      auto pos = static_cast<std::size_t>(*e.value);
      auto it = st.sessions.find(e.scenario);
      if (pos == 1) {
        if (it != st.sessions.end()) throw ProtocolError("session already open");
        auto seq_pos = static_cast<std::size_t>(
            std::find(participant.sequence.begin(), participant.sequence.end(), e.scenario) -
            participant.sequence.begin());
        if (seq_pos != st.sessions.size()) throw ProtocolError("scenario opened out of order");
        Session s;
        s.scenario = e.scenario;
        s.position = seq_pos;
        s.visits = 1;
        s.recipe_ids.push_back(e.recipe_id);
        st.sessions.emplace(e.scenario, std::move(s));
      } else {
        if (it == st.sessions.end() || it->second.recipe_ids.size() != pos - 1) {
          throw ProtocolError("serve record out of sequence");
        }
        it->second.recipe_ids.push_back(e.recipe_id);
      }
      break;
    }
    case EventKind::Visit:
      ++session_or_throw().visits;
      break;
    case EventKind::Click:
    case EventKind::BrowseStart:
    case EventKind::BrowseEnd:
      require_listed(session_or_throw());
      break;
    case EventKind::Rate: {
      auto& s = session_or_throw();
      require_listed(s);
      if (!e.value || *e.value < kMinRecipeRating || *e.value > kMaxRecipeRating) {
        throw ValidationError("value", fmt::format("rating must be an integer in [{}, {}]", kMinRecipeRating,
                                                   kMaxRecipeRating));
      }
      require_unfrozen("ratings");
      auto cast = s.rated_in_visit.find(e.recipe_id);
      if (cast != s.rated_in_visit.end() && cast->second != s.visits) {
        throw ProtocolError(fmt::format("recipe '{}' was already rated on an earlier visit", e.recipe_id));
      }
      s.ratings[e.recipe_id] = *e.value;
      s.rated_in_visit[e.recipe_id] = s.visits;
      break;
    }
    case EventKind::Pin: {
      auto& s = session_or_throw();
      require_listed(s);
      require_unfrozen("pins");
      if (s.pin && *s.pin != e.recipe_id && completion_locked(st).complete) {
        throw ProtocolError("the pinned recipe cannot change once the study is complete");
      }
      s.pin = e.recipe_id;
      break;
    }
    case EventKind::QuestionnaireStart: {
      if (st.questionnaire_phase) throw ProtocolError("questionnaire already started");
      auto report = completion_locked(st);
      if (!report.complete) {
        throw ProtocolError(fmt::format("study incomplete: {} of {} ratings and {} of {} pins", report.ratings,
                                        kRequiredRatings, report.pins, kRequiredPins));
      }
      st.questionnaire_phase = true;
      break;
    }
    case EventKind::Questionnaire: {
      if (!st.questionnaire_phase) throw ProtocolError("questionnaire has not started");
      auto c = parse_criterion(e.recipe_id);
      if (!e.value || *e.value < kMinQuestionnaireRating || *e.value > kMaxQuestionnaireRating) {
        throw ValidationError(std::string(to_string(c)),
                              fmt::format("answers must be integers in [{}, {}]", kMinQuestionnaireRating,
                                          kMaxQuestionnaireRating));
      }
      auto& slot = st.answers[e.scenario][static_cast<std::size_t>(c)];
      if (slot) throw ProtocolError("questionnaire answer already submitted");
      slot = *e.value;
      break;
    }
  }

  log_.push_back(e);
  if (sink_) sink_(e);
}

CompletionReport StudyStore::completion_locked(const State& st) const {
  CompletionReport r;
  for (auto scenario : st.participant.sequence) {
    ScenarioCompletion c;
    c.scenario = scenario;
    auto it = st.sessions.find(scenario);
    if (it == st.sessions.end()) {
      c.missing_ratings = kRecListSize;
    } else {
      const auto& s = it->second;
      c.opened = true;
      for (const auto& id : s.recipe_ids) {
        if (!s.ratings.count(id)) c.unrated_recipe_ids.push_back(id);
      }
      c.missing_ratings = c.unrated_recipe_ids.size();
      c.missing_pin = !s.pin.has_value();
      r.ratings += s.ratings.size();
      r.pins += s.pin ? 1 : 0;
    }
    r.scenarios.push_back(std::move(c));
  }
  r.complete = r.ratings == kRequiredRatings && r.pins == kRequiredPins;
  return r;
}

CompletionReport StudyStore::validate_completion(std::string_view pn) const {
  std::shared_lock lock(mutex_);
  return completion_locked(state_for(pn));
}

void StudyStore::begin_questionnaire(std::string_view pn, std::int64_t timestamp_ms) {
  apply({std::string(pn), ScenarioKind::NoNudge, "", EventKind::QuestionnaireStart, std::nullopt, timestamp_ms});
}

bool StudyStore::in_questionnaire(std::string_view pn) const {
  std::shared_lock lock(mutex_);
  return state_for(pn).questionnaire_phase;
}

void StudyStore::submit_questionnaire(std::string_view pn, const QuestionnaireResponse& response,
                                      std::int64_t timestamp_ms) {
  std::unique_lock lock(mutex_);
  auto& st = state_for(pn);
  if (!st.questionnaire_phase) throw ProtocolError("questionnaire has not started");
  for (auto c : kAllCriteria) {
    int v = response.ratings[static_cast<std::size_t>(c)];
    if (v < kMinQuestionnaireRating || v > kMaxQuestionnaireRating) {
      throw ValidationError(std::string(to_string(c)),
                            fmt::format("answers must be integers in [{}, {}]", kMinQuestionnaireRating,
                                        kMaxQuestionnaireRating));
    }
  }
  if (auto it = st.answers.find(response.scenario); it != st.answers.end()) {
    for (const auto& slot : it->second) {
      if (slot) throw ProtocolError(fmt::format("questionnaire for {} already submitted", to_string(response.scenario)));
    }
  }
  for (auto c : kAllCriteria) {
    apply_locked({std::string(pn), response.scenario, std::string(to_string(c)), EventKind::Questionnaire,
                  response.ratings[static_cast<std::size_t>(c)], timestamp_ms});
  }
}

std::vector<QuestionnaireResponse> StudyStore::questionnaire(std::string_view pn) const {
  std::shared_lock lock(mutex_);
  const auto& st = state_for(pn);
  std::vector<QuestionnaireResponse> out;
  for (auto scenario : st.participant.sequence) {
    auto it = st.answers.find(scenario);
    if (it == st.answers.end()) continue;
    QuestionnaireResponse r;
    r.scenario = scenario;
    bool full = true;
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      if (!it->second[i]) full = false;
      else r.ratings[i] = *it->second[i];
    }
    if (full) out.push_back(r);
  }
  return out;
}

std::vector<SessionEvent> StudyStore::events() const {
  std::shared_lock lock(mutex_);
  return log_;
}

nlohmann::json StudyStore::snapshot() const {
  std::shared_lock lock(mutex_);
  nlohmann::json participants = nlohmann::json::array();
  std::vector<const Participant*> ordered;
  for (const auto& [_, s] : states_) ordered.push_back(&s.participant);
  std::sort(ordered.begin(), ordered.end(),
            [](const Participant* a, const Participant* b) { return a->sequence_index < b->sequence_index; });
  for (const auto* p : ordered) participants.push_back(to_json(*p));
  return {{"participants", participants}, {"event_count", log_.size()}};
}

void StudyStore::restore(const nlohmann::json& snapshot, const std::vector<SessionEvent>& log) {
  {
    std::unique_lock lock(mutex_);
    states_.clear();
    log_.clear();
  }
  if (!snapshot.contains("participants") || !snapshot.at("participants").is_array()) {
    throw LoadError("snapshot has no participants array");
  }
  for (const auto& p : snapshot.at("participants")) restore_participant(participant_from_json(p));
  for (const auto& e : log) replay(e);
}

std::vector<SessionRecord> collect_sessions(const std::vector<SessionEvent>& events) {
  std::vector<SessionRecord> out;
  std::map<std::pair<std::string, ScenarioKind>, std::size_t> index;
  std::map<std::size_t, std::int64_t> first_click_time;
  std::map<std::pair<std::size_t, std::string>, std::int64_t> open_browse;
  std::map<std::size_t, bool> served;

  for (const auto& e : events) {
    if (e.kind == EventKind::QuestionnaireStart || e.kind == EventKind::Questionnaire) continue;
    auto key = std::make_pair(e.participant_number, e.scenario);
    auto [it, inserted] = index.emplace(key, out.size());
    if (inserted) {
      SessionRecord r;
      r.participant_number = e.participant_number;
      r.scenario = e.scenario;
      out.push_back(std::move(r));
    }
    auto i = it->second;
    auto& r = out[i];
    switch (e.kind) {
      case EventKind::Serve:
        served[i] = true;
        if (std::find(r.recipe_ids.begin(), r.recipe_ids.end(), e.recipe_id) == r.recipe_ids.end()) {
          r.recipe_ids.push_back(e.recipe_id);
        }
        break;
      case EventKind::Rate:
        if (!e.value) break;
        r.ratings[e.recipe_id] = *e.value;
        break;
      case EventKind::Click: {
        auto t = first_click_time.find(i);
        if (t == first_click_time.end() || e.timestamp_ms < t->second) {
          first_click_time[i] = e.timestamp_ms;
          r.first_click = e.recipe_id;
        }
        break;
      }
      case EventKind::Pin:
        r.pin = e.recipe_id;
        break;
      case EventKind::BrowseStart:
        open_browse[{i, e.recipe_id}] = e.timestamp_ms;
        break;
      case EventKind::BrowseEnd: {
        auto b = open_browse.find({i, e.recipe_id});
        if (b != open_browse.end()) {
          r.browse_time_ms[e.recipe_id] += std::max<std::int64_t>(0, e.timestamp_ms - b->second);
          open_browse.erase(b);
        }
        break;
      }
      default:
        break;
    }
  }
  // Logs without serve records: fall back to the rated recipes.
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (served.count(i)) continue;
    for (const auto& e : events) {
      if (e.kind != EventKind::Rate || e.participant_number != out[i].participant_number ||
          e.scenario != out[i].scenario) {
        continue;
      }
      auto& ids = out[i].recipe_ids;
      if (std::find(ids.begin(), ids.end(), e.recipe_id) == ids.end()) ids.push_back(e.recipe_id);
    }
  }
  return out;
}

}  // namespace nudge
