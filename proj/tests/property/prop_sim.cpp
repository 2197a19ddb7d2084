#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "gen.hpp"
#include "sim/kitchen_sim.hpp"

using namespace bcr;
using namespace bcr::sim;
using bcr::prop::Gen;
using bcr::prop::kCases;

namespace {

const std::vector<std::string> kTasks{"coffee", "apple", "mug", "toast"};

const Problem& cached_task(const std::string& name) {
  static std::map<std::string, Problem> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, testing::task(name)).first;
  return it->second;
}

// Every object the simulator has, so random actions can name things the
// agent has not seen yet.
std::vector<GroundedAction> action_pool(const KitchenSim& sim) {
  InstanceTable all;
  for (const auto& c : testing::kitchen_domain().constants) all[c.id] = c.category;
  for (const auto& id : sim.object_ids()) all[id] = sim.object(id).category;
  return all_groundings(testing::kitchen_domain(), all);
}

void check_conservation(const KitchenSim& sim) {
  int held = 0;
  for (const auto& id : sim.object_ids()) {
    const SimObject o = sim.object(id);
    if (!o.pickupable) continue;
    // exactly one of: held, resting at a station's surface, inside a container
    CHECK_MESSAGE(o.held != !o.location.empty(), id);
    if (o.held) {
      ++held;
      CHECK(sim.agent().held == id);
    } else {
      const SimObject r = sim.object(o.location);
      CHECK_MESSAGE(r.receptacle, id << " sits on " << o.location);
    }
  }
  CHECK(held == (sim.agent().held ? 1 : 0));
}

void check_sound(const KitchenSim& sim, const Observation& obs) {
  for (const auto& l : obs.literals) {
    REQUIRE(is_certain(l.value));
    CHECK_MESSAGE(sim.truth(l.atom) == (l.value == TruthValue::kTrue), l.to_string());
  }
  const auto ids = sim.object_ids();
  for (const auto& i : obs.revealed) CHECK(std::find(ids.begin(), ids.end(), i.id) != ids.end());
}

}  // namespace

TEST_CASE("random walks conserve objects, never lie and replay identically") {
  Gen g(0x71);
  std::map<std::string, std::vector<GroundedAction>> pools;
  for (int n = 0; n < kCases; ++n) {
    CAPTURE(n);
    const std::string& name = g.pick(kTasks);
    const uint64_t seed = g.u64() % 1000;
    CAPTURE(name);
    CAPTURE(seed);
    KitchenSim sim(testing::kitchen_domain(), cached_task(name), seed);
    auto& pool = pools[name];
    if (pool.empty()) pool = action_pool(sim);
    check_conservation(sim);
    check_sound(sim, sim.initial_observation());

    std::vector<GroundedAction> walk;
    std::vector<ExecResult> results;
    for (int k = g.range(1, 30); k > 0; --k) {
      walk.push_back(g.pick(pool));
      results.push_back(sim.execute(walk.back()));
      const auto& r = results.back();
      CHECK(r.condition.has_value() == (r.outcome == Outcome::kBlocked));
      CHECK(r.error.empty() == (r.outcome != Outcome::kError));
      check_conservation(sim);
      check_sound(sim, r.observation);
    }
    CHECK(sim.step_count() == static_cast<int>(walk.size()));

    KitchenSim again(testing::kitchen_domain(), cached_task(name), seed);
    for (size_t i = 0; i < walk.size(); ++i) {
      const auto r = again.execute(walk[i]);
      CHECK(r.outcome == results[i].outcome);
      CHECK(r.condition == results[i].condition);
      CHECK(r.observation == results[i].observation);
    }
    CHECK(again.raw_state() == sim.raw_state());
  }
}

TEST_CASE("the fridge door blocks grabs from the side on every such seed") {
  const Problem& p = cached_task("toast");
  int occluded = 0;
  for (uint64_t seed = 0; seed < static_cast<uint64_t>(kCases); ++seed) {
    KitchenSim sim(testing::kitchen_domain(), p, seed);
    if (sim.object("bread_1").location != "fridge_1") continue;
    CAPTURE(seed);
    ++occluded;
    sim.execute({"walk_to_object", {"fridge_1"}});
    REQUIRE(sim.execute({"open", {"fridge_1"}}).outcome == Outcome::kSuccess);
    CHECK(sim.execute({"grab", {"bread_1"}}).outcome == Outcome::kBlocked);
    sim.execute({"moveforward", {}});
    CHECK(sim.execute({"grab", {"bread_1"}}).outcome == Outcome::kSuccess);
  }
  CHECK(occluded > 0);
}
