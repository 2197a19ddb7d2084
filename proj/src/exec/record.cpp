#include "exec/record.hpp"

#include "core/error.hpp"

namespace bcr {

namespace {

using json = nlohmann::json;

json literal_json(const Literal& l) {
  return {{"predicate", l.atom.predicate}, {"args", l.atom.args},
          {"value", std::string(to_string(l.value))}};
}

Literal literal_from_json(const json& j) {
  auto v = parse_truth_value(j.at("value").get<std::string>());
  if (!v) throw Error(ErrorCode::kValidation, "bad truth value in log");
  return {{j.at("predicate").get<std::string>(), j.at("args").get<std::vector<std::string>>()}, *v};
}

json literals_json(const std::vector<Literal>& ls) {
  json out = json::array();
  for (const auto& l : ls) out.push_back(literal_json(l));
  return out;
}

std::vector<Literal> literals_from_json(const json& j) {
  std::vector<Literal> out;
  for (const auto& l : j) out.push_back(literal_from_json(l));
  return out;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json();
}

sim::Outcome parse_outcome(const std::string& s) {
  if (s == "success") return sim::Outcome::kSuccess;
  if (s == "blocked") return sim::Outcome::kBlocked;
  if (s == "error") return sim::Outcome::kError;
  throw Error(ErrorCode::kValidation, "bad outcome in log: " + s);
}

}  // namespace

const char* to_string(TrialResult result) {
  switch (result) {
    case TrialResult::kSuccess: return "success";
    case TrialResult::kBudgetExhausted: return "budget_exhausted";
    case TrialResult::kDeadEnd: return "dead_end";
    case TrialResult::kEngineExhausted: return "engine_exhausted";
    case TrialResult::kUnsolvable: return "unsolvable";
    case TrialResult::kAborted: return "aborted";
  }
  return "dead_end";
}

TrialResult parse_trial_result(const std::string& text) {
  for (auto r : {TrialResult::kSuccess, TrialResult::kBudgetExhausted, TrialResult::kDeadEnd,
                 TrialResult::kEngineExhausted, TrialResult::kUnsolvable,
                 TrialResult::kAborted})
    if (text == to_string(r)) return r;
  throw Error(ErrorCode::kValidation, "bad trial result in log: " + text);
}

std::optional<double> TrialRecord::mean_considered() const {
  double sum = 0;
  int n = 0;
  if (!episodes.empty()) {
    for (const auto& e : episodes) sum += e.nodes_expanded, ++n;
  } else {
    for (const auto& s : steps) sum += static_cast<double>(s.candidates.size()), ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

json to_json(const Observation& obs) {
  json revealed = json::array();
  for (const auto& i : obs.revealed) revealed.push_back({{"id", i.id}, {"category", i.category}});
  return {{"literals", literals_json(obs.literals)}, {"revealed", revealed}};
}

json to_json(const StepContext& ctx) {
  return {{"previous_actions", ctx.previous_actions},
          {"completed_subgoals", literals_json(ctx.completed_subgoals)},
          {"remaining_goals", literals_json(ctx.remaining_goals)},
          {"last_error", ctx.last_error ? json(*ctx.last_error) : json()},
          {"agent_summary", ctx.agent_summary}};
}

StepContext step_context_from_json(const json& j) {
  StepContext ctx;
  ctx.previous_actions = j.at("previous_actions").get<std::vector<std::string>>();
  ctx.completed_subgoals = literals_from_json(j.at("completed_subgoals"));
  ctx.remaining_goals = literals_from_json(j.at("remaining_goals"));
  if (!j.at("last_error").is_null()) ctx.last_error = j["last_error"].get<std::string>();
  ctx.agent_summary = j.at("agent_summary").get<std::string>();
  return ctx;
}

std::vector<std::string> to_jsonl(const TrialRecord& r) {
  std::vector<std::string> lines;
  const json trial = {{"task", r.task}, {"condition", r.condition}, {"seed", r.seed}};
  lines.push_back(json{{"schema", kLogSchema}, {"type", "trial_start"}, {"trial", trial},
                       {"max_actions", r.max_actions}}
                      .dump());
  size_t e = 0;
  auto flush_episodes = [&](int upto) {
    for (; e < r.episodes.size() && r.episodes[e].before_step <= upto; ++e) {
      const auto& ep = r.episodes[e];
      lines.push_back(json{{"schema", kLogSchema}, {"type", "episode"}, {"trial", trial},
                           {"before_step", ep.before_step}, {"trigger", ep.trigger},
                           {"solved", ep.solved}, {"nodes_expanded", ep.nodes_expanded},
                           {"plan_length", ep.plan_length}}
                          .dump());
    }
  };
  for (const auto& s : r.steps) {
    flush_episodes(s.index);
    json j = {{"schema", kLogSchema},
              {"type", "step"},
              {"trial", trial},
              {"index", s.index},
              {"candidate_count", s.candidates.size()},
              {"candidates", s.candidates},
              {"action", s.action},
              {"outcome", sim::to_string(s.outcome)},
              {"condition", s.condition ? json(*s.condition) : json()},
              {"error", s.error},
              {"observation", to_json(s.observation)},
              {"retries", s.retries},
              {"fallback", s.fallback},
              {"elapsed_s", optional_number(s.elapsed_s)}};
    if (s.context) j["context"] = to_json(*s.context);
    if (s.forest) j["forest"] = *s.forest;
    lines.push_back(j.dump());
  }
  flush_episodes(1 << 30);
  lines.push_back(json{{"schema", kLogSchema},
                       {"type", "trial_end"},
                       {"trial", trial},
                       {"result", to_string(r.result)},
                       {"steps", r.steps.size()},
                       {"episodes", r.episodes.size()},
                       {"goal_in_belief", r.goal_in_belief},
                       {"goal_in_truth", r.goal_in_truth},
                       {"loop_detected", r.loop_detected},
                       {"mean_considered", optional_number(r.mean_considered())},
                       {"runtime_s", optional_number(r.runtime_s)},
                       {"failure", r.failure ? json(*r.failure) : json()}}
                      .dump());
  return lines;
}

TrialRecord from_jsonl(const std::vector<std::string>& lines) {
  TrialRecord r;
  bool ended = false;
  for (const auto& line : lines) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    if (j.value("schema", "") != kLogSchema)
      throw Error(ErrorCode::kValidation, "not a bcr-log/v1 line");
    const auto& t = j.at("trial");
    r.task = t.at("task");
    r.condition = t.at("condition");
    r.seed = t.at("seed");
    const std::string type = j.at("type");
    if (type == "trial_start") {
      r.max_actions = j.at("max_actions");
    } else if (type == "step") {
      StepRecord s;
      s.index = j.at("index");
      s.candidates = j.at("candidates").get<std::vector<std::string>>();
      s.action = j.at("action");
      s.outcome = parse_outcome(j.at("outcome"));
      if (!j.at("condition").is_null()) s.condition = j["condition"].get<std::string>();
      s.error = j.at("error");
      s.retries = j.at("retries");
      s.fallback = j.at("fallback");
      if (!j.at("elapsed_s").is_null()) s.elapsed_s = j["elapsed_s"].get<double>();
      if (j.contains("context")) s.context = step_context_from_json(j["context"]);
      if (j.contains("forest")) s.forest = j["forest"];
      r.steps.push_back(std::move(s));
    } else if (type == "episode") {
      r.episodes.push_back({j.at("before_step"), j.at("trigger"), j.at("solved"),
                            j.at("nodes_expanded"), j.at("plan_length")});
    } else if (type == "trial_end") {
      r.result = parse_trial_result(j.at("result"));
      r.goal_in_belief = j.at("goal_in_belief");
      r.goal_in_truth = j.at("goal_in_truth");
      r.loop_detected = j.at("loop_detected");
      if (!j.at("runtime_s").is_null()) r.runtime_s = j["runtime_s"].get<double>();
      if (j.contains("failure") && !j["failure"].is_null())
        r.failure = j["failure"].get<std::string>();
      ended = true;
    }
  }
  if (!ended) throw Error(ErrorCode::kValidation, "log has no trial_end line");
  return r;
}

}  // namespace bcr

namespace bcr {

void LoopDetector::record(const BeliefState& belief, const std::string& action) {
  std::string digest;
  for (const auto& [atom, value] : belief.entries)
    digest += atom.key() + '=' + std::string(to_string(value)) + ';';
  for (const auto& [id, category] : belief.known_instances) digest += id + ':' + category + ';';
  if (++seen_[{std::hash<std::string>{}(digest), action}] >= 3) detected_ = true;
}

}  // namespace bcr
