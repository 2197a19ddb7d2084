#pragma once

#include <array>
#include <memory>
#include <set>

#include "sim/world.hpp"

namespace bcr::sim {

/// The fetch-the-milk scenario: milk sits at the back of the refrigerator,
/// opening it only reveals what is in front, and a visual search of the
/// open refrigerator finds the milk.
class MilkWorld final : public World {
 public:
  enum class Where { kFridgeFront, kFridgeBack, kHeld, kCounter };
  struct State {
    std::array<Where, 3> items{Where::kFridgeBack, Where::kFridgeFront,
                               Where::kFridgeFront};  // milk, yogurt, juice
    std::array<bool, 3> open{};  // refrigerator, freezer, oven
    bool searched = false;
    bool operator==(const State&) const = default;
    auto operator<=>(const State&) const = default;
  };

  MilkWorld(const Domain& domain, const Problem& problem);

  const Observation& initial_observation() const override { return initial_obs_; }
  ExecResult execute(const GroundedAction& action) override;
  int step_count() const override { return step_count_; }
  std::unique_ptr<World> clone() const override;
  bool goal_satisfied(const std::vector<Literal>& goal) const override;
  std::vector<Literal> location_facts() const override;
  std::optional<int> distance_to_goal() const override;
  std::optional<std::vector<GroundedAction>> min_plan() const override;
  bool concealed(const std::string& id) const override;

  bool truth(const Atom& atom) const { return truth(state_, atom); }
  const State& state() const { return state_; }

 private:
  bool truth(const State& s, const Atom& atom) const;
  // Applies `action` to `s`; returns the index of the blocking condition,
  // -1 on success, -2 on error.
  int step(State& s, const GroundedAction& action, std::string* error) const;
  Observation observe();
  std::vector<GroundedAction> actions() const;

  std::shared_ptr<const Domain> domain_;
  std::vector<Literal> goal_;
  State state_;
  std::set<std::string> known_;
  int step_count_ = 0;
  Observation initial_obs_;
};

}  // namespace bcr::sim
