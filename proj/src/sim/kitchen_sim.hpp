#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sim/world.hpp"

namespace bcr::sim {

enum class Kind { kItem, kTool, kContainer, kSurface, kAppliance, kFixture };
enum class Facing { kNorth, kEast, kSouth, kWest };
enum class Pitch { kLevel, kUp, kDown };

/// Read-only view of one object, assembled from the static layout and the
/// dynamic state.
struct SimObject {
  std::string id;
  std::string category;
  Kind kind = Kind::kItem;
  std::string location;  // receptacle id; empty for fixtures and held objects
  bool openable = false;
  bool open = false;
  bool pickupable = false;
  bool held = false;
  bool receptacle = false;
  bool toggleable = false;
  bool on = false;
  bool sliceable = false;
  bool sliced = false;
  // Objects hidden by this object's open door when viewed from the side.
  std::vector<std::string> occludes;
};

struct AgentView {
  std::string room;
  std::string station;
  Facing facing = Facing::kNorth;
  Pitch pitch = Pitch::kLevel;
  std::optional<std::string> held;
};

struct Layout;
struct DistanceCache;

/// Deterministic partially observable kitchen: ten fixtures, seven
/// pickupable objects, stations instead of metric positions, and a fridge
/// whose open door hides its interior from the default approach station.
/// The agent sees what it holds and what it is looking at; looking at an
/// open container from the front shows everything inside.
class KitchenSim final : public World {
 public:
  struct ObjState {
    int16_t location = -1;  // index of receptacle, -1 when held or fixture
    bool open = false;
    bool on = false;
    bool sliced = false;
    bool operator==(const ObjState&) const = default;
  };
  struct AgentState {
    int16_t station = 0;
    Facing facing = Facing::kNorth;
    Pitch pitch = Pitch::kLevel;
    int16_t held = -1;
    int16_t gaze = -1;  // object the agent is looking at
    bool operator==(const AgentState&) const = default;
  };
  struct State {
    std::vector<ObjState> objects;
    AgentState agent;
    bool operator==(const State&) const = default;
  };

  /// Resets to the seeded initial placement. Throws UnknownTask when the
  /// problem names objects the layout does not have.
  KitchenSim(const Domain& domain, const Problem& problem, uint64_t seed);

  const Observation& initial_observation() const override { return initial_obs_; }
  ExecResult execute(const GroundedAction& action) override;
  int step_count() const override { return step_count_; }
  std::unique_ptr<World> clone() const override;

  bool goal_satisfied(const std::vector<Literal>& goal) const override;
  std::vector<Literal> location_facts() const override;
  std::optional<int> distance_to_goal() const override;
  std::optional<std::vector<GroundedAction>> min_plan() const override;

  // Introspection used by tests and the harness.
  SimObject object(const std::string& id) const;
  AgentView agent() const;
  bool truth(const Atom& atom) const;
  bool visible(const std::string& id) const;
  bool concealed(const std::string& id) const override;
  std::vector<std::string> object_ids() const;
  /// Pickupable objects the goal or the problem's tools depend on.
  std::vector<std::string> relevant_objects() const;
  /// True when some relevant object starts inside a closed container, so
  /// any plan has to open something just to see it.
  bool needs_information_gathering() const;
  const State& raw_state() const { return state_; }

 private:
  KitchenSim() = default;

  int index_of(const std::string& id) const;
  Observation observe();
  std::vector<GroundedAction> search_actions(const State& s) const;

  std::shared_ptr<const Layout> layout_;
  std::shared_ptr<const Domain> domain_;
  std::vector<Literal> goal_;
  std::vector<int> relevant_;
  std::vector<int> goal_toggles_;
  std::vector<int> goal_containers_;
  State state_;
  State initial_state_;
  std::set<int> known_;
  int step_count_ = 0;
  Observation initial_obs_;
  std::shared_ptr<DistanceCache> cache_;
};

}  // namespace bcr::sim
