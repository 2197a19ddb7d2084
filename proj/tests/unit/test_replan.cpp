#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "replan/replan.hpp"
#include "sim/kitchen_sim.hpp"

using namespace bcr;
using namespace bcr::replan;
using bcr::testing::kitchen_domain;
using bcr::testing::milk_domain;
using bcr::testing::task;

namespace {

const ClassicalSchema& schema(const ClassicalDomain& d, const std::string& name) {
  auto it = std::find_if(d.schemas.begin(), d.schemas.end(),
                         [&](const ClassicalSchema& s) { return s.name == name; });
  REQUIRE(it != d.schemas.end());
  return *it;
}

bool has_atom(const std::vector<Atom>& v, const Atom& a) {
  return std::find(v.begin(), v.end(), a) != v.end();
}

BeliefState start_belief(const Domain& d, const Problem& p) {
  BeliefState b;
  b.known_instances = declared_instances(d, p);
  for (const auto& l : p.initial_known) b.entries[l.atom] = l.value;
  return b;
}

}  // namespace

TEST_CASE("determinize") {
  const auto milk = determinize(milk_domain());
  CHECK(has_atom(schema(milk, "open").add, {"isOpen", {"?r"}}));
  CHECK(schema(milk, "open").preconditions.empty());
  CHECK(schema(milk, "grasp").preconditions ==
        std::vector<Literal>{{{"isVisible", {"?o"}}, TruthValue::kTrue}});

  const auto kitchen = determinize(kitchen_domain());
  const auto& grab = schema(kitchen, "grab");
  CHECK(std::count(grab.preconditions.begin(), grab.preconditions.end(),
                   Literal{{"isVisible", {"?o"}}, TruthValue::kTrue}) == 1);
  CHECK(has_atom(grab.add, {"isHolding", {"?o"}}));
  CHECK(has_atom(grab.del, {"handEmpty", {"character"}}));
  CHECK(schema(kitchen, "moveforward").preconditions.empty());
  // Bound possibly_false becomes a delete.
  CHECK(has_atom(schema(kitchen, "put").del, {"isVisible", {"?v"}}));
}

TEST_CASE("open's bound visibility guess is an add once grounded") {
  // In the milk domain open's isVisible(?o) is quantified, so it is dropped.
  const auto milk = determinize(milk_domain());
  CHECK_FALSE(has_atom(schema(milk, "open").add, {"isVisible", {"?o"}}));
  const auto acts = ground_classical(milk, declared_instances(milk_domain(), task("milk")));
  CHECK(std::any_of(acts.begin(), acts.end(), [](const ClassicalAction& a) {
    return a.action.text() == "place milk counter";
  }));
}

TEST_CASE("plan basics") {
  const auto d = determinize(milk_domain());
  const Problem p = task("milk");
  BeliefState b = start_belief(milk_domain(), p);

  // Goal already true: empty plan, one node.
  BeliefState done = b;
  done.entries[{"On", {"milk", "counter"}}] = TruthValue::kTrue;
  auto e = plan(d, done, p.goal);
  CHECK(e.solved);
  CHECK(e.plan.empty());
  CHECK(e.nodes_expanded == 1);

  // Milk never becomes visible classically: unsolvable.
  e = plan(d, b, p.goal);
  CHECK_FALSE(e.solved);

  b.entries[{"isVisible", {"milk"}}] = TruthValue::kTrue;
  e = plan(d, b, p.goal);
  REQUIRE(e.solved);
  CHECK(e.plan == std::vector<GroundedAction>{{"grasp", {"milk"}}, {"place", {"milk", "counter"}}});
  CHECK(e.nodes_expanded >= static_cast<int>(e.plan.size()));
  CHECK(plan_valid(d, b, p.goal, e.plan));
  CHECK_FALSE(plan_valid(d, b, p.goal, {{"place", {"milk", "counter"}}}));
  const auto again = plan(d, b, p.goal);
  CHECK(again.plan == e.plan);
  CHECK(again.nodes_expanded == e.nodes_expanded);
}

TEST_CASE("strip_locations") {
  const Problem p = task("apple");
  CHECK(goal_objects(p) == std::vector<std::string>{"apple_1"});
  Problem q = p;
  q.initial_known.push_back({{"On", {"apple_1", "table_1"}}, TruthValue::kTrue});
  q.initial_known.push_back({{"objectInRoom", {"apple_1", "kitchen"}}, TruthValue::kTrue});
  q.initial_known.push_back({{"isVisible", {"apple_1"}}, TruthValue::kFalse});
  const auto once = strip_locations(q, goal_objects(q));
  CHECK(once.initial_known == p.initial_known);
  CHECK(strip_locations(once, goal_objects(q)) == once);
  CHECK(strip_locations(q, {}) == q);
}

TEST_CASE("full observability matches the BFS length on an unconcealed seed") {
  const Problem p = task("apple");
  sim::KitchenSim world(kitchen_domain(), p, 0);
  REQUIRE_FALSE(world.needs_information_gathering());
  const auto bfs = world.min_plan();
  REQUIRE(bfs.has_value());
  const auto r = replan_execute(world, kitchen_domain(), p, Observability::kFull);
  CHECK(r.result == TrialResult::kSuccess);
  CHECK(r.steps.size() == bfs->size());
  CHECK(r.condition == "ffreplan");
  REQUIRE(r.episodes.size() == 1);
  CHECK(r.episodes[0].nodes_expanded >= static_cast<int>(bfs->size()));
}

TEST_CASE("limited observability is unsolvable") {
  const Problem p = task("apple");
  sim::KitchenSim world(kitchen_domain(), p, 0);
  const auto r = replan_execute(world, kitchen_domain(), p, Observability::kLimited);
  CHECK(r.result == TrialResult::kUnsolvable);
  CHECK(r.condition == "ffreplan-limited");
  CHECK(r.steps.empty());
  REQUIRE(r.episodes.size() == 1);
  CHECK_FALSE(r.episodes[0].solved);
  CHECK(r.episodes[0].nodes_expanded > 0);
}

TEST_CASE("a concealed apple forces replanning") {
  const Problem p = task("apple");
  sim::KitchenSim world(kitchen_domain(), p, 1);
  REQUIRE(world.needs_information_gathering());
  const auto r = replan_execute(world, kitchen_domain(), p, Observability::kFull);
  CHECK(r.episodes.size() >= 2);
  CHECK(std::any_of(r.episodes.begin() + 1, r.episodes.end(),
                    [](const EpisodeRecord& e) { return e.trigger != "initial"; }));
  CHECK(static_cast<int>(r.steps.size()) <= 100);
}

TEST_CASE("budget is respected") {
  const Problem p = task("mug");
  sim::KitchenSim world(kitchen_domain(), p, 0);
  const auto r = replan_execute(world, kitchen_domain(), p, Observability::kFull, 2);
  CHECK(r.result == TrialResult::kBudgetExhausted);
  CHECK(r.steps.size() == 2);
}
