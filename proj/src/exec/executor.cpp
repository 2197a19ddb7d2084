#include "exec/executor.hpp"

#include <algorithm>
#include <chrono>

#include "core/error.hpp"
#include "forest/forest.hpp"
#include "parser/domain_parser.hpp"

namespace bcr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

bool holds_true(const BeliefState& b, const Literal& l) {
  return holds(b, l) == TruthValue::kTrue;
}

// Ground truth for the scripted oracle, reached only through clones.
class WorldOracle final : public OracleView {
 public:
  WorldOracle(const sim::World& world, const Domain& domain, const Problem& problem,
              const BeliefState& belief)
      : world_(world), domain_(domain), problem_(problem), belief_(belief) {}

  Probe probe(const std::string& action) const override {
    Probe p;
    GroundedAction a;
    try {
      a = parser::parse_action(action, domain_, belief_.known_instances);
    } catch (const Error&) {
      return p;
    }
    auto copy = world_.clone();
    const auto r = copy->execute(a);
    p.success = r.outcome == sim::Outcome::kSuccess;
    p.blocked = r.outcome == sim::Outcome::kBlocked;
    p.distance_after = copy->distance_to_goal();
    return p;
  }

  std::optional<int> distance() const override { return world_.distance_to_goal(); }

  std::vector<std::string> unlocated_goal_objects() const override {
    std::vector<std::string> out;
    for (const auto& l : problem_.goal) {
      for (const auto& id : l.atom.args) {
        auto cat = belief_.known_instances.find(id);
        if (cat == belief_.known_instances.end() ||
            (cat->second != "item" && cat->second != "tool"))
          continue;
        if (std::find(out.begin(), out.end(), id) != out.end() || world_.concealed(id)) continue;
        const bool located = std::any_of(
            belief_.entries.begin(), belief_.entries.end(), [&](const auto& e) {
              const Atom& a = e.first;
              return e.second == TruthValue::kTrue && !a.args.empty() && a.args[0] == id &&
                     (a.predicate == "On" || a.predicate == "Inside" ||
                      a.predicate == "isHolding");
            });
        if (!located) out.push_back(id);
      }
    }
    return out;
  }

 private:
  const sim::World& world_;
  const Domain& domain_;
  const Problem& problem_;
  const BeliefState& belief_;
};

std::string describe_failure(const std::string& action, const sim::ExecResult& r) {
  if (r.outcome == sim::Outcome::kBlocked) {
    std::string unmet;
    for (const auto& l : r.condition->resolution) unmet += (unmet.empty() ? "" : ", ") + l.to_string();
    return action + " was blocked (" + r.condition->name + "); it needs " + unmet;
  }
  return action + " failed: " + r.error;
}

}  // namespace

std::string agent_summary(const BeliefState& belief) {
  std::string room, held;
  for (const auto& [atom, value] : belief.entries) {
    if (value != TruthValue::kTrue) continue;
    if (atom.predicate == "inRoom" && atom.args.size() == 2) room = atom.args[1];
    if (atom.predicate == "isHolding" && atom.args.size() == 1) held = atom.args[0];
  }
  std::string out;
  if (!room.empty()) out += "I am in the " + room + ". ";
  out += held.empty() ? "I am not holding anything." : "I am holding " + held + ".";
  return out;
}

TrialRecord run_trial(const TrialConfig& config, const Domain& domain, const Problem& problem,
                      const SelectionEngine& engine) {
  auto world = sim::make_world(domain, problem, config.seed);
  return run_trial(config, domain, problem, engine, *world);
}

TrialRecord run_trial(const TrialConfig& config, const Domain& domain, const Problem& problem,
                      const SelectionEngine& engine, sim::World& world) {
  if (config.max_actions < 1) throw Error(ErrorCode::kConfig, "max_actions must be >= 1");
  const auto start = Clock::now();
  TrialRecord rec;
  rec.task = config.task.empty() ? problem.name : config.task;
  rec.condition = engine.name();
  rec.seed = config.seed;
  rec.max_actions = config.max_actions;

  BeliefState belief;
  belief.known_instances = declared_instances(domain, problem);
  for (const auto& l : problem.initial_known) belief.entries[l.atom] = l.value;
  belief = apply_observation(belief, world.initial_observation());

  std::vector<Literal> resolved;  // resolution literals met so far, in order
  std::vector<std::string> previous;
  std::optional<std::string> last_error;
  LoopDetector loops;
  ResolutionForest forest;
  bool forest_ok = true;
  try {
    forest = ResolutionForest::init(problem.goal, domain, belief);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoAchiever) throw;
    forest_ok = false;
  }

  auto goal_in_belief = [&] {
    return std::all_of(problem.goal.begin(), problem.goal.end(),
                       [&](const Literal& l) { return holds_true(belief, l); });
  };

  while (true) {
    if (forest_ok) forest.refresh(domain, belief);
    if (goal_in_belief() && world.goal_satisfied(problem.goal)) {
      rec.result = TrialResult::kSuccess;
      break;
    }
    if (static_cast<int>(rec.steps.size()) >= config.max_actions) {
      rec.result = TrialResult::kBudgetExhausted;
      break;
    }
    if (!forest_ok || forest.empty()) {
      rec.result = TrialResult::kDeadEnd;
      break;
    }

    StepRecord step;
    step.index = static_cast<int>(rec.steps.size());
    const auto candidates = forest.candidates();
    SelectionContext ctx;
    for (const auto& c : candidates) ctx.candidates.push_back(c.action.text());
    ctx.previous_actions = previous;
    for (const auto& g : problem.goal)
      (holds_true(belief, g) ? ctx.completed_subgoals : ctx.remaining_goals).push_back(g);
    for (const auto& l : resolved)
      if (holds_true(belief, l) && std::find(ctx.completed_subgoals.begin(),
                                             ctx.completed_subgoals.end(),
                                             l) == ctx.completed_subgoals.end())
        ctx.completed_subgoals.push_back(l);
    ctx.last_error = last_error;
    ctx.agent_summary = agent_summary(belief);
    const WorldOracle oracle(world, domain, problem, belief);
    ctx.oracle = &oracle;
    step.candidates = ctx.candidates;
    step.context = StepContext{ctx.previous_actions, ctx.completed_subgoals, ctx.remaining_goals,
                               ctx.last_error, ctx.agent_summary};
    if (config.forest_snapshots) step.forest = forest.to_json();

    const auto decision_start = Clock::now();
    Selection sel;
    try {
      sel = engine.select(ctx, config.seed * 1000003ULL + static_cast<uint64_t>(step.index));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kSelectionExhausted) {
        sel = {OracleEngine::tie_break(ctx.candidates), std::nullopt, 0};
        step.fallback = true;
      } else if (e.code() == ErrorCode::kTransport) {
        step.error = e.what();
        rec.result = TrialResult::kEngineExhausted;
        break;
      } else {
        throw;
      }
    }
    step.retries = sel.retries_used;
    const auto chosen = std::find_if(candidates.begin(), candidates.end(),
                                     [&](const Candidate& c) { return c.action.text() == sel.action; });
    if (chosen == candidates.end())
      throw Error(ErrorCode::kValidation, engine.name() + " selected a non-candidate: " + sel.action);

    loops.record(belief, sel.action);
    const sim::ExecResult r = world.execute(chosen->action);
    belief = apply_observation(belief, r.observation);
    if (config.wall_clock) step.elapsed_s = seconds_since(decision_start);

    const Node& node = forest.node(chosen->node);
    std::optional<GroundCondition> parent_condition;
    if (node.parent) parent_condition = forest.node(*node.parent).condition;
    switch (r.outcome) {
      case sim::Outcome::kBlocked:
        forest.on_blocked(chosen->node, *r.condition, domain, belief);
        break;
      case sim::Outcome::kSuccess:
        if (parent_condition && condition_resolved(belief, *parent_condition))
          for (const auto& l : parent_condition->resolution)
            if (std::find(resolved.begin(), resolved.end(), l) == resolved.end())
              resolved.push_back(l);
        forest.on_success(chosen->node, domain, belief);
        break;
      case sim::Outcome::kError:
        forest.on_error(chosen->node);
        break;
    }
    last_error = r.outcome == sim::Outcome::kSuccess
                     ? std::nullopt
                     : std::optional<std::string>(describe_failure(sel.action, r));
    previous.push_back(sel.action);

    step.action = sel.action;
    step.outcome = r.outcome;
    if (r.condition) step.condition = r.condition->name;
    step.error = r.error;
    step.observation = r.observation;
    rec.steps.push_back(std::move(step));
  }

  rec.goal_in_truth = world.goal_satisfied(problem.goal);
  rec.goal_in_belief = goal_in_belief();
  if (rec.goal_in_truth) rec.result = TrialResult::kSuccess;
  else if (rec.result == TrialResult::kSuccess) rec.result = TrialResult::kDeadEnd;
  rec.loop_detected = loops.detected();
  if (config.wall_clock) rec.runtime_s = seconds_since(start);
  return rec;
}

}  // namespace bcr
