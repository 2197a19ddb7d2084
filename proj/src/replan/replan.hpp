#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "core/belief.hpp"
#include "core/domain.hpp"
#include "core/grounding.hpp"
#include "exec/record.hpp"
#include "sim/world.hpp"

namespace bcr::replan {

/// A schema after determinization. Effects may still mention variables
/// outside the parameter list; those apply to every compatible instance.
struct ClassicalSchema {
  std::string name;
  std::vector<Parameter> parameters;
  std::vector<Literal> preconditions;             // negated one-literal triggers
  std::vector<std::vector<Literal>> forbidden;    // multi-literal triggers
  std::vector<Atom> add;
  std::vector<Atom> del;
};

struct ClassicalDomain {
  Domain source;
  std::vector<ClassicalSchema> schemas;
};

/// possibly_true/possibly_false become true/false on parameter-bound
/// atoms. Quantified possibly_false effects become deletes and quantified
/// possibly_true effects are dropped: the planner never counts on seeing
/// something it cannot name. Triggers turn into negated preconditions.
ClassicalDomain determinize(const Domain& domain);

struct ClassicalAction {
  GroundedAction action;
  std::vector<Atom> pre_true;
  std::vector<Atom> pre_false;
  std::vector<std::vector<Literal>> forbidden;
  std::vector<Atom> add;
  std::vector<Atom> del;
  std::vector<Atom> bound_add;  // parameter-bound part, used to spot surprises
  std::vector<Atom> bound_del;
};

/// Ground actions with at least one effect; a bound effect beats a
/// quantified one on the same atom.
std::vector<ClassicalAction> ground_classical(const ClassicalDomain& domain,
                                              const InstanceTable& instances);

struct PlanOptions {
  int max_expansions = 2000;
};

struct PlanEpisode {
  bool solved = false;
  bool hit_limit = false;
  std::vector<GroundedAction> plan;
  int nodes_expanded = 0;
  std::chrono::microseconds search_time{0};
};

/// A* over the closed-world reading of `belief` (anything not known true is
/// false), ordered by g + h_max so plans are shortest; ties go to lower
/// h_add, then to insertion order. Dead-end states (infinite estimate) stay
/// in the queue behind everything else.
PlanEpisode plan(const ClassicalDomain& domain, const BeliefState& belief,
                 const std::vector<Literal>& goal, const PlanOptions& options = {});

/// Checks `steps` classically from the closed-world `belief`.
bool plan_valid(const ClassicalDomain& domain, const BeliefState& belief,
                const std::vector<Literal>& goal, const std::vector<GroundedAction>& steps);

/// Item and tool instances named by the goal.
std::vector<std::string> goal_objects(const Problem& problem);

/// Drops containment, room and visibility literals about `objects`.
Problem strip_locations(const Problem& problem, const std::vector<std::string>& objects);
BeliefState strip_locations(const BeliefState& belief, const std::vector<std::string>& objects);

enum class Observability { kFull, kLimited };

/// Plan, execute, and replan on a block, an error or an observation that
/// contradicts a bound effect. Full observability adds the world's location
/// facts to the belief before each planning call; limited strips goal-object
/// locations instead.
TrialRecord replan_execute(sim::World& world, const Domain& domain, const Problem& problem,
                           Observability observability, int budget = 100,
                           const PlanOptions& options = {});

}  // namespace bcr::replan
