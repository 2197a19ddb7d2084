#pragma once

#include <map>
#include <vector>

#include "core/domain.hpp"
#include "core/grounding.hpp"
#include "core/literal.hpp"

namespace bcr {

struct Observation {
  std::vector<Literal> literals;   // ground, true/false only
  std::vector<Instance> revealed;  // instances seen for the first time

  bool empty() const { return literals.empty() && revealed.empty(); }
  bool operator==(const Observation&) const = default;
};

/// The agent's partial view of the world. Absent entries are Unknown.
struct BeliefState {
  std::map<Atom, TruthValue> entries;
  InstanceTable known_instances;

  TruthValue lookup(const Atom& atom) const;
  bool operator==(const BeliefState&) const = default;
};

/// Three-valued check of a ground true/false literal against the belief.
TruthValue holds(const BeliefState& state, const Literal& literal);

BeliefState apply_observation(BeliefState state, const Observation& obs);

/// Unknown never triggers: every trigger literal must hold positively.
bool condition_triggered(const BeliefState& state, const GroundCondition& c);
bool condition_resolved(const BeliefState& state, const GroundCondition& c);

}  // namespace bcr
