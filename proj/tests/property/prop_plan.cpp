#include <algorithm>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "gen.hpp"
#include "replan/replan.hpp"
#include "sim/kitchen_sim.hpp"

using namespace bcr;
using bcr::prop::Gen;
using bcr::prop::kCases;

namespace {

// STRIPS semantics written out directly: preconditions against a set of
// true atoms, deletes before adds, goal checked at the end.
bool replays(const std::vector<replan::ClassicalAction>& ground, const BeliefState& belief,
             const std::vector<Literal>& goal, const std::vector<GroundedAction>& steps) {
  std::set<Atom> s;
  for (const auto& [atom, v] : belief.entries)
    if (v == TruthValue::kTrue) s.insert(atom);
  auto holds_now = [&](const Literal& l) { return s.count(l.atom) == (l.value == TruthValue::kTrue ? 1u : 0u); };
  for (const auto& step : steps) {
    auto it = std::find_if(ground.begin(), ground.end(),
                           [&](const replan::ClassicalAction& a) { return a.action == step; });
    if (it == ground.end()) return false;
    for (const auto& a : it->pre_true)
      if (!s.count(a)) return false;
    for (const auto& a : it->pre_false)
      if (s.count(a)) return false;
    for (const auto& f : it->forbidden)
      if (std::all_of(f.begin(), f.end(), holds_now)) return false;
    for (const auto& a : it->del) s.erase(a);
    for (const auto& a : it->add) s.insert(a);
  }
  return std::all_of(goal.begin(), goal.end(), holds_now);
}

}  // namespace

TEST_CASE("returned plans replay classically; search is deterministic") {
  const Domain& d = testing::kitchen_domain();
  const replan::ClassicalDomain cd = replan::determinize(d);
  std::map<std::string, Problem> tasks;
  for (const char* t : {"coffee", "apple", "mug", "toast"}) tasks.emplace(t, testing::task(t));
  std::vector<std::string> names;
  for (const auto& [n, p] : tasks) names.push_back(n);
  std::map<std::string, std::vector<GroundedAction>> pools;

  Gen g(0x81);
  int solved = 0;
  for (int n = 0; n < kCases; ++n) {
    CAPTURE(n);
    const std::string& name = g.pick(names);
    const Problem& p = tasks.at(name);
    sim::KitchenSim sim(d, p, g.u64() % 1000);

    BeliefState b;
    b.known_instances = declared_instances(d, p);
    for (const auto& l : p.initial_known) b.entries[l.atom] = l.value;
    b = apply_observation(b, sim.initial_observation());
    auto& pool = pools[name];
    if (pool.empty()) pool = all_groundings(d, b.known_instances);
    for (int k = g.range(0, 12); k > 0; --k) b = apply_observation(b, sim.execute(g.pick(pool)).observation);

    replan::PlanOptions opts;
    const bool limited = g.coin(0.15);
    if (limited) {
      b = replan::strip_locations(b, replan::goal_objects(p));
      opts.max_expansions = 300;
    } else {
      b = apply_observation(b, Observation{sim.location_facts(), {}});
    }
    const auto ep = replan::plan(cd, b, p.goal, opts);
    const auto again = replan::plan(cd, b, p.goal, opts);
    CHECK(again.plan == ep.plan);
    CHECK(again.nodes_expanded == ep.nodes_expanded);
    CHECK_FALSE((ep.solved && ep.hit_limit));
    if (ep.hit_limit) CHECK(ep.nodes_expanded >= opts.max_expansions);
    if (!ep.solved) continue;
    ++solved;
    CHECK(ep.nodes_expanded >= static_cast<int>(ep.plan.size()));
    const auto ground = replan::ground_classical(cd, b.known_instances);
    CHECK(replays(ground, b, p.goal, ep.plan));
    CHECK(replan::plan_valid(cd, b, p.goal, ep.plan));
    if (!ep.plan.empty()) {
      // A plan missing a step must be judged the same way by both checkers.
      auto cut = ep.plan;
      cut.erase(cut.begin() + g.range(0, static_cast<int>(cut.size()) - 1));
      CHECK(replays(ground, b, p.goal, cut) == replan::plan_valid(cd, b, p.goal, cut));
    }
  }
  CHECK(solved > kCases / 2);
}
