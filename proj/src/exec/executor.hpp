#pragma once

#include <cstdint>
#include <string>

#include "core/domain.hpp"
#include "exec/record.hpp"
#include "select/selection.hpp"
#include "sim/world.hpp"

namespace bcr {

struct TrialConfig {
  std::string task;
  uint64_t seed = 0;
  int max_actions = 100;
  bool wall_clock = false;      // record runtimes (makes logs differ run to run)
  bool forest_snapshots = true;
};

/// "I am in the kitchen. I am holding mug_1." from the belief.
std::string agent_summary(const BeliefState& belief);

/// The select -> execute -> update loop. Runtime failures become the
/// record's result; only a bad config throws.
TrialRecord run_trial(const TrialConfig& config, const Domain& domain, const Problem& problem,
                      const SelectionEngine& engine, sim::World& world);

/// Same, on a freshly seeded world.
TrialRecord run_trial(const TrialConfig& config, const Domain& domain, const Problem& problem,
                      const SelectionEngine& engine);

}  // namespace bcr
