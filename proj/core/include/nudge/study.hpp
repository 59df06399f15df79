#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nudge/health_profile.hpp"
#include "nudge/nudges.hpp"
#include "nudge/recommender.hpp"

namespace nudge {

inline constexpr std::size_t kSequenceCount = 24;
inline constexpr int kMinRecipeRating = 0;
inline constexpr int kMaxRecipeRating = 5;
inline constexpr int kMinQuestionnaireRating = 1;
inline constexpr int kMaxQuestionnaireRating = 5;

using ScenarioSequence = std::array<ScenarioKind, kScenarioCount>;

/// Lexicographic permutation number (index mod 24) of the four scenario kinds.
ScenarioSequence assign_sequence(std::uint64_t participant_index);

enum class EventKind {
  Click,
  BrowseStart,
  BrowseEnd,
  Rate,
  Pin,
  // Bookkeeping records written by the store itself.
  Serve,
  Visit,
  QuestionnaireStart,
  Questionnaire,
};

std::string_view to_string(EventKind k);
EventKind parse_event_kind(std::string_view s);
/// Kinds a client may submit through record_event.
bool is_client_event(EventKind k);

struct SessionEvent {
  std::string participant_number;
  ScenarioKind scenario = ScenarioKind::NoNudge;
  std::string recipe_id;
  EventKind kind = EventKind::Click;
  std::optional<int> value;
  std::int64_t timestamp_ms = 0;
};

nlohmann::json to_json(const SessionEvent& e);
/// Throws ValidationError on a malformed record.
SessionEvent event_from_json(const nlohmann::json& j);

struct EventLog {
  std::vector<SessionEvent> events;
  std::size_t malformed = 0;
};

/// Reads a line-delimited event log, skipping and counting malformed lines.
EventLog parse_event_log(std::istream& in);
EventLog load_event_log(const std::filesystem::path& path);
void write_event_log(std::ostream& out, const std::vector<SessionEvent>& events);

enum class Criterion { Effectiveness, Understandability, Persuasiveness, LongTerm };
inline constexpr std::array<Criterion, 4> kAllCriteria{Criterion::Effectiveness, Criterion::Understandability,
                                                      Criterion::Persuasiveness, Criterion::LongTerm};
std::string_view to_string(Criterion c);
Criterion parse_criterion(std::string_view s);

struct QuestionnaireResponse {
  ScenarioKind scenario = ScenarioKind::NoNudge;
  std::array<int, 4> ratings{};  // indexed by Criterion
};

struct RegistrationInput {
  UserHealthInput health;
  std::vector<std::string> liked;
  std::vector<std::string> disliked;
  std::vector<double> topic_affinity;
  bool consent = false;
};

struct Participant {
  std::string participant_number;
  std::string user_id;
  UserHealthInput health;
  HealthProfile profile;
  TasteProfile taste;
  std::uint64_t sequence_index = 0;
  ScenarioSequence sequence{};
};

nlohmann::json to_json(const Participant& p);
Participant participant_from_json(const nlohmann::json& j);

struct Session {
  ScenarioKind scenario = ScenarioKind::NoNudge;
  std::size_t position = 0;
  std::vector<std::string> recipe_ids;
  std::map<std::string, int> ratings;
  std::optional<std::string> pin;
  int visits = 0;
  // Visit number in which each rating was cast; ratings are frozen on later visits.
  std::map<std::string, int> rated_in_visit;
};

struct ScenarioCompletion {
  ScenarioKind scenario = ScenarioKind::NoNudge;
  bool opened = false;
  std::size_t missing_ratings = 0;
  // Empty when the session was never opened.
  std::vector<std::string> unrated_recipe_ids;
  bool missing_pin = true;
};

struct CompletionReport {
  bool complete = false;
  std::size_t ratings = 0;
  std::size_t pins = 0;
  std::vector<ScenarioCompletion> scenarios;  // in sequence order
};

nlohmann::json to_json(const CompletionReport& r);

inline constexpr std::size_t kRequiredRatings = kRecListSize * kScenarioCount;
inline constexpr std::size_t kRequiredPins = kScenarioCount;

/// Participant registry, session state and append-only event log.
/// Every state change goes through one event, so replaying the log against
/// the registry rebuilds the same state. Writers are serialized internally.
class StudyStore {
 public:
  using Sink = std::function<void(const SessionEvent&)>;

  StudyStore() = default;
  /// `sink` receives each accepted event after it has been applied.
  explicit StudyStore(Sink sink) : sink_(std::move(sink)) {}

  /// Throws ValidationError (consent, field errors) or OutOfModelError.
  /// Nothing is stored on failure.
  const Participant& register_participant(const RegistrationInput& input, std::string user_id);

  /// Adds a participant read back from a snapshot.
  void restore_participant(Participant p);

  std::optional<Participant> participant(std::string_view participant_number) const;
  std::optional<Participant> find_by_user(std::string_view user_id, std::string_view participant_number) const;
  std::size_t participant_count() const;

  /// Number of scenario sessions the participant has opened.
  std::size_t opened_count(std::string_view participant_number) const;
  std::optional<Session> session(std::string_view participant_number, ScenarioKind scenario) const;

  /// Opens the scenario at the next position or revisits an opened one.
  /// Returns the stored session. Throws ProtocolError on out-of-order access.
  Session open_session(std::string_view participant_number, ScenarioKind scenario,
                       const std::vector<std::string>& recipe_ids, std::int64_t timestamp_ms);

  /// Client events only. Throws ProtocolError or ValidationError when rejected.
  void record_event(const SessionEvent& event);

  CompletionReport validate_completion(std::string_view participant_number) const;

  /// Requires a complete study; afterwards ratings and pins are frozen.
  void begin_questionnaire(std::string_view participant_number, std::int64_t timestamp_ms);
  bool in_questionnaire(std::string_view participant_number) const;
  void submit_questionnaire(std::string_view participant_number, const QuestionnaireResponse& response,
                            std::int64_t timestamp_ms);
  std::vector<QuestionnaireResponse> questionnaire(std::string_view participant_number) const;

  /// Accepted events in arrival order.
  std::vector<SessionEvent> events() const;

  /// Applies a recorded event without forwarding it to the sink.
  void replay(const SessionEvent& event);

  /// Participant registry only; session state lives in the event log.
  nlohmann::json snapshot() const;
  /// Replaces the contents with a snapshot and a replay of its event log.
  void restore(const nlohmann::json& snapshot, const std::vector<SessionEvent>& log);

 private:
  struct State {
    Participant participant;
    std::map<ScenarioKind, Session> sessions;
    bool questionnaire_phase = false;
    std::map<ScenarioKind, std::array<std::optional<int>, 4>> answers;
  };

  void apply(const SessionEvent& event);
  void apply_locked(const SessionEvent& event);
  State& state_for(std::string_view participant_number);
  const State& state_for(std::string_view participant_number) const;
  CompletionReport completion_locked(const State& s) const;

  mutable std::shared_mutex mutex_;
  std::map<std::string, State, std::less<>> states_;
  std::vector<SessionEvent> log_;
  Sink sink_;
};

/// What one participant did in one scenario, reconstructed leniently from a
/// log for offline metrics.
struct SessionRecord {
  std::string participant_number;
  ScenarioKind scenario = ScenarioKind::NoNudge;
  std::vector<std::string> recipe_ids;
  std::map<std::string, int> ratings;
  std::optional<std::string> first_click;
  std::optional<std::string> pin;
  std::map<std::string, std::int64_t> browse_time_ms;
};

/// Sessions in order of first appearance. Served lists come from serve
/// records, or from rated recipes in rating order when none were logged.
std::vector<SessionRecord> collect_sessions(const std::vector<SessionEvent>& events);

}  // namespace nudge
