#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/belief.hpp"
#include "core/domain.hpp"
#include "core/grounding.hpp"

namespace bcr::sim {

enum class Outcome { kSuccess, kBlocked, kError };

const char* to_string(Outcome outcome);

struct ExecResult {
  Outcome outcome = Outcome::kSuccess;
  std::optional<GroundCondition> condition;  // set iff kBlocked
  std::string error;                         // set iff kError
  Observation observation;
};

/// Environment the executor and baselines act on. Agents only see
/// ExecResult observations; the members marked harness/test-only expose
/// ground truth for scoring and for the scripted oracle.
class World {
 public:
  virtual ~World() = default;

  virtual const Observation& initial_observation() const = 0;
  virtual ExecResult execute(const GroundedAction& action) = 0;
  virtual int step_count() const = 0;
  virtual std::unique_ptr<World> clone() const = 0;

  // Harness-only.
  virtual bool goal_satisfied(const std::vector<Literal>& goal) const = 0;
  /// Location facts for declared objects (what a fully informed planner is
  /// given up front).
  virtual std::vector<Literal> location_facts() const = 0;

  // Test-only: shortest remaining plan length under full observability,
  // nullopt when unreachable.
  virtual std::optional<int> distance_to_goal() const = 0;
  virtual std::optional<std::vector<GroundedAction>> min_plan() const = 0;
  /// Whether `id` is shut inside a closed container.
  virtual bool concealed(const std::string& id) const = 0;
};

/// Picks the world implementation for the domain ("kitchen" or "milk").
std::unique_ptr<World> make_world(const Domain& domain, const Problem& problem,
                                  uint64_t seed);

}  // namespace bcr::sim
