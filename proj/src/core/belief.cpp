#include "core/belief.hpp"

#include <algorithm>

namespace bcr {

TruthValue BeliefState::lookup(const Atom& atom) const {
  auto it = entries.find(atom);
  return it == entries.end() ? TruthValue::kUnknown : it->second;
}

TruthValue holds(const BeliefState& state, const Literal& literal) {
  const TruthValue stored = state.lookup(literal.atom);
  if (stored == TruthValue::kUnknown) return TruthValue::kUnknown;
  return stored == certain(literal.value) ? TruthValue::kTrue
                                          : TruthValue::kFalse;
}

BeliefState apply_observation(BeliefState state, const Observation& obs) {
  for (const auto& inst : obs.revealed)
    state.known_instances.emplace(inst.id, inst.category);
  for (const auto& l : obs.literals) state.entries[l.atom] = l.value;
  return state;
}

namespace {
bool all_hold(const BeliefState& state, const std::vector<Literal>& ls) {
  return std::all_of(ls.begin(), ls.end(), [&](const Literal& l) {
    return holds(state, l) == TruthValue::kTrue;
  });
}
}  // namespace

bool condition_triggered(const BeliefState& state, const GroundCondition& c) {
  return !c.trigger.empty() && all_hold(state, c.trigger);
}

bool condition_resolved(const BeliefState& state, const GroundCondition& c) {
  return all_hold(state, c.resolution);
}

}  // namespace bcr
