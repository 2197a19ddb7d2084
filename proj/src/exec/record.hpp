#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/belief.hpp"
#include "json.hpp"
#include "sim/world.hpp"

namespace bcr {

inline constexpr const char* kLogSchema = "bcr-log/v1";

// kAborted: the trial threw; the suite records it and moves on.
enum class TrialResult {
  kSuccess,
  kBudgetExhausted,
  kDeadEnd,
  kEngineExhausted,
  kUnsolvable,
  kAborted
};

const char* to_string(TrialResult result);
TrialResult parse_trial_result(const std::string& text);

struct StepContext {
  std::vector<std::string> previous_actions;
  std::vector<Literal> completed_subgoals;
  std::vector<Literal> remaining_goals;
  std::optional<std::string> last_error;
  std::string agent_summary;
};

struct StepRecord {
  int index = 0;
  std::vector<std::string> candidates;  // empty for the planning baselines
  std::string action;
  sim::Outcome outcome = sim::Outcome::kSuccess;
  std::optional<std::string> condition;
  std::string error;
  Observation observation;
  int retries = 0;
  bool fallback = false;  // engine exhausted, oracle tie-break used
  std::optional<double> elapsed_s;
  std::optional<StepContext> context;     // BCR engines only
  std::optional<nlohmann::json> forest;   // snapshot before selection
};

/// One planning call of the replanning baselines.
struct EpisodeRecord {
  int before_step = 0;
  std::string trigger;  // initial | mismatch | blocked | error
  bool solved = false;
  int nodes_expanded = 0;
  int plan_length = 0;
};

struct TrialRecord {
  std::string task;
  std::string condition;
  uint64_t seed = 0;
  int max_actions = 100;
  std::vector<StepRecord> steps;
  std::vector<EpisodeRecord> episodes;
  TrialResult result = TrialResult::kBudgetExhausted;
  bool goal_in_belief = false;
  bool goal_in_truth = false;
  bool loop_detected = false;
  std::optional<double> runtime_s;
  std::optional<std::string> failure;  // set when aborted

  /// Mean candidate-set size per decision (BCR) or mean nodes expanded per
  /// planning episode (baselines); nullopt when there was none.
  std::optional<double> mean_considered() const;
};

nlohmann::json to_json(const Observation& obs);
nlohmann::json to_json(const StepContext& ctx);
StepContext step_context_from_json(const nlohmann::json& j);

/// Header, one line per step and episode, then the trailer.
std::vector<std::string> to_jsonl(const TrialRecord& record);
/// Rebuilds the summary fields (result, counts, considered) from log lines.
TrialRecord from_jsonl(const std::vector<std::string>& lines);

}  // namespace bcr

namespace bcr {

/// Flags a trial once the same (belief digest, action) pair has been seen
/// three times.
class LoopDetector {
 public:
  void record(const BeliefState& belief, const std::string& action);
  bool detected() const { return detected_; }

 private:
  std::map<std::pair<size_t, std::string>, int> seen_;
  bool detected_ = false;
};

}  // namespace bcr
