#include "sim/milk_world.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "core/error.hpp"

namespace bcr::sim {

namespace {

const std::array<std::string, 3> kItems = {"milk", "yogurt", "juice"};
const std::array<std::string, 3> kAppliances = {"refrigerator", "freezer", "oven"};

int find(const std::array<std::string, 3>& names, const std::string& id) {
  auto it = std::find(names.begin(), names.end(), id);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

}  // namespace

MilkWorld::MilkWorld(const Domain& domain, const Problem& problem)
    : domain_(std::make_shared<const Domain>(domain)), goal_(problem.goal) {
  for (const auto& [id, category] : declared_instances(domain, problem)) {
    const bool ok = find(kItems, id) >= 0 || find(kAppliances, id) >= 0 ||
                    id == "counter" || category == "bias";
    if (!ok) throw Error(ErrorCode::kUnknownTask, problem.name + ": milk world has no " + id);
    known_.insert(id);
  }
  initial_obs_ = observe();
}

std::unique_ptr<World> MilkWorld::clone() const {
  return std::make_unique<MilkWorld>(*this);
}

bool MilkWorld::truth(const State& s, const Atom& atom) const {
  const auto& args = atom.args;
  if (atom.predicate == "isOpen") {
    int r = find(kAppliances, args.at(0));
    return r >= 0 && s.open[r];
  }
  const int i = args.empty() ? -1 : find(kItems, args[0]);
  if (i < 0) return false;
  const Where w = s.items[i];
  if (atom.predicate == "isHolding") return w == Where::kHeld;
  if (atom.predicate == "On") return args.at(1) == "counter" && w == Where::kCounter;
  if (atom.predicate == "isVisible") {
    switch (w) {
      case Where::kHeld:
      case Where::kCounter: return true;
      case Where::kFridgeFront: return s.open[0];
      case Where::kFridgeBack: return s.open[0] && s.searched;
    }
  }
  return false;
}

int MilkWorld::step(State& s, const GroundedAction& action, std::string* error) const {
  const ActionSchema* schema = domain_->schema(action.schema);
  if (!schema) {
    if (error) *error = "unknown action " + action.schema;
    return -2;
  }
  for (size_t c = 0; c < schema->blocking_conditions.size(); ++c) {
    GroundCondition g = ground_condition(*schema, schema->blocking_conditions[c], action);
    const bool fired = !g.trigger.empty() &&
        std::all_of(g.trigger.begin(), g.trigger.end(), [&](const Literal& l) {
          return truth(s, l.atom) == (l.value == TruthValue::kTrue);
        });
    if (fired) return static_cast<int>(c);
  }
  const auto& a = action.args;
  if (action.schema == "place") {
    s.items[find(kItems, a.at(0))] = Where::kCounter;
  } else if (action.schema == "grasp") {
    const int i = find(kItems, a.at(0));
    if (i < 0) {
      if (error) *error = "nothing called " + a.at(0) + " to grasp";
      return -2;
    }
    s.items[i] = Where::kHeld;
  } else if (action.schema == "open") {
    s.open[find(kAppliances, a.at(0))] = true;
  } else if (action.schema == "visualSearch") {
    if (s.open[0]) s.searched = true;
  }
  return -1;
}

ExecResult MilkWorld::execute(const GroundedAction& action) {
  ++step_count_;
  ExecResult out;
  const int r = step(state_, action, &out.error);
  if (r == -2) {
    out.outcome = Outcome::kError;
  } else if (r >= 0) {
    out.outcome = Outcome::kBlocked;
    const ActionSchema* schema = domain_->schema(action.schema);
    out.condition = ground_condition(*schema, schema->blocking_conditions[r], action);
  }
  out.observation = observe();
  return out;
}

Observation MilkWorld::observe() {
  Observation obs;
  std::map<Atom, bool> lits;
  for (size_t i = 0; i < kItems.size(); ++i) {
    const std::string& id = kItems[i];
    const bool vis = truth(state_, {"isVisible", {id}});
    if (vis && !known_.count(id)) {
      known_.insert(id);
      obs.revealed.push_back({id, "item"});
    }
    if (!known_.count(id)) continue;
    lits[{"isVisible", {id}}] = vis;
    lits[{"isHolding", {id}}] = state_.items[i] == Where::kHeld;
    if (vis) lits[{"On", {id, "counter"}}] = state_.items[i] == Where::kCounter;
  }
  for (size_t r = 0; r < kAppliances.size(); ++r)
    if (known_.count(kAppliances[r])) lits[{"isOpen", {kAppliances[r]}}] = state_.open[r];
  for (const auto& [atom, v] : lits)
    obs.literals.push_back({atom, v ? TruthValue::kTrue : TruthValue::kFalse});
  return obs;
}

bool MilkWorld::goal_satisfied(const std::vector<Literal>& goal) const {
  return std::all_of(goal.begin(), goal.end(), [&](const Literal& l) {
    return truth(state_, l.atom) == (certain(l.value) == TruthValue::kTrue);
  });
}

std::vector<Literal> MilkWorld::location_facts() const {
  std::vector<Literal> out;
  for (size_t i = 0; i < kItems.size(); ++i)
    if (known_.count(kItems[i]))
      out.push_back({{"On", {kItems[i], "counter"}},
                     state_.items[i] == Where::kCounter ? TruthValue::kTrue : TruthValue::kFalse});
  return out;
}

std::vector<GroundedAction> MilkWorld::actions() const {
  std::vector<GroundedAction> out;
  for (const auto& i : kItems) {
    out.push_back({"grasp", {i}});
    out.push_back({"place", {i, "counter"}});
  }
  for (const auto& r : kAppliances) out.push_back({"open", {r}});
  for (const auto& id : known_)
    if (id.find("bias") != std::string::npos) out.push_back({"visualSearch", {id}});
  return out;
}

std::optional<std::vector<GroundedAction>> MilkWorld::min_plan() const {
  struct Node {
    State s;
    int parent;
    GroundedAction a;
  };
  auto done = [&](const State& s) {
    return std::all_of(goal_.begin(), goal_.end(), [&](const Literal& l) {
      return truth(s, l.atom) == (certain(l.value) == TruthValue::kTrue);
    });
  };
  if (done(state_)) return std::vector<GroundedAction>{};
  std::vector<Node> nodes{{state_, -1, {}}};
  std::set<State> seen{state_};
  for (size_t head = 0; head < nodes.size(); ++head) {
    for (const auto& a : actions()) {
      State next = nodes[head].s;
      if (step(next, a, nullptr) != -1 || !seen.insert(next).second) continue;
      nodes.push_back({next, static_cast<int>(head), a});
      if (done(next)) {
        std::vector<GroundedAction> plan;
        for (int n = static_cast<int>(nodes.size()) - 1; n > 0; n = nodes[n].parent)
          plan.push_back(nodes[n].a);
        std::reverse(plan.begin(), plan.end());
        return plan;
      }
    }
  }
  return std::nullopt;
}

bool MilkWorld::concealed(const std::string& id) const {
  const int i = find(kItems, id);
  if (i < 0) return false;
  const Where w = state_.items[i];
  return (w == Where::kFridgeFront || w == Where::kFridgeBack) && !state_.open[0];
}

std::optional<int> MilkWorld::distance_to_goal() const {
  auto plan = min_plan();
  if (!plan) return std::nullopt;
  return static_cast<int>(plan->size());
}

}  // namespace bcr::sim
