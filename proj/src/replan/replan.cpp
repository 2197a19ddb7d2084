#include "replan/replan.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>

#include "core/error.hpp"

namespace bcr::replan {

namespace {

bool bound_atom(const Atom& atom, const std::vector<Parameter>& params) {
  return std::all_of(atom.args.begin(), atom.args.end(), [&](const std::string& a) {
    if (!is_variable(a)) return true;
    return std::any_of(params.begin(), params.end(),
                       [&](const Parameter& p) { return p.variable == a; });
  });
}

TruthValue negate(TruthValue v) {
  return certain(v) == TruthValue::kTrue ? TruthValue::kFalse : TruthValue::kTrue;
}

// Every ground instance of `atom` with the remaining variables enumerated
// over instances the predicate's slots accept.
void expand_atom(const Domain& domain, const Atom& atom, const InstanceTable& instances,
                 const std::function<void(const Atom&)>& emit) {
  const Predicate* pred = domain.predicate(atom.predicate);
  if (!pred) return;
  std::function<void(size_t, Atom&)> rec = [&](size_t i, Atom& a) {
    if (i == a.args.size()) return emit(a);
    if (!is_variable(a.args[i])) return rec(i + 1, a);
    const std::string var = a.args[i];
    for (const auto& [id, cat] : instances) {
      if (!accepts(pred->parameter_categories[i], cat)) continue;
      Atom next = a;
      for (auto& x : next.args)
        if (x == var) x = id;
      rec(i + 1, next);
    }
  };
  Atom copy = atom;
  rec(0, copy);
}

std::optional<ClassicalAction> ground_with(const ClassicalDomain& cd, const ClassicalSchema& s,
                                           const GroundedAction& action,
                                           const InstanceTable& instances) {
  Bindings b;
  for (size_t i = 0; i < s.parameters.size(); ++i) b[s.parameters[i].variable] = action.args[i];
  auto subst = [&](const Atom& a) { return substitute(Literal{a, TruthValue::kTrue}, b).atom; };

  std::map<Atom, bool> quantified;  // atom -> add?
  std::map<Atom, bool> bound;
  for (const auto& [atoms, is_add] : {std::pair{&s.add, true}, std::pair{&s.del, false}}) {
    for (const auto& a : *atoms) {
      const Atom partial = subst(a);
      if (partial.is_ground()) {
        bound[partial] = is_add;
        continue;
      }
      expand_atom(cd.source, partial, instances, [&](const Atom& g) {
        auto [it, inserted] = quantified.emplace(g, is_add);
        if (!inserted && is_add) it->second = true;
      });
    }
  }
  for (const auto& [atom, is_add] : bound) quantified[atom] = is_add;
  if (quantified.empty()) return std::nullopt;

  ClassicalAction out;
  out.action = action;
  for (const auto& [atom, is_add] : quantified) (is_add ? out.add : out.del).push_back(atom);
  for (const auto& [atom, is_add] : bound) (is_add ? out.bound_add : out.bound_del).push_back(atom);
  for (const auto& p : s.preconditions) {
    const Literal g = substitute(p, b);
    (g.value == TruthValue::kTrue ? out.pre_true : out.pre_false).push_back(g.atom);
  }
  for (const auto& f : s.forbidden) {
    std::vector<Literal> g;
    for (const auto& l : f) g.push_back(substitute(l, b));
    out.forbidden.push_back(std::move(g));
  }
  return out;
}

const ClassicalSchema* find_schema(const ClassicalDomain& cd, const std::string& name) {
  for (const auto& s : cd.schemas)
    if (s.name == name) return &s;
  return nullptr;
}

std::optional<ClassicalAction> ground_one(const ClassicalDomain& cd, const GroundedAction& action,
                                          const InstanceTable& instances) {
  const ClassicalSchema* s = find_schema(cd, action.schema);
  if (!s || s->parameters.size() != action.args.size()) return std::nullopt;
  return ground_with(cd, *s, action, instances);
}

// Closed-world states as bitsets over interned ground atoms.
class Compiled {
 public:
  Compiled(const std::vector<ClassicalAction>& actions, const BeliefState& belief,
           const std::vector<Literal>& goal) {
    for (const auto& a : actions) {
      Op op;
      for (const auto& x : a.pre_true) op.pre_true.push_back(intern(x));
      for (const auto& x : a.pre_false) op.pre_false.push_back(intern(x));
      for (const auto& f : a.forbidden) {
        std::vector<std::pair<int, bool>> conj;
        for (const auto& l : f) conj.push_back({intern(l.atom), l.value == TruthValue::kTrue});
        op.forbidden.push_back(std::move(conj));
      }
      for (const auto& x : a.add) op.add.push_back(intern(x));
      for (const auto& x : a.del) op.del.push_back(intern(x));
      ops.push_back(std::move(op));
    }
    for (const auto& l : goal) {
      const int id = intern(l.atom);
      (certain(l.value) == TruthValue::kTrue ? goal_true : goal_false).push_back(id);
    }
    std::vector<int> init;
    for (const auto& [atom, v] : belief.entries)
      if (v == TruthValue::kTrue) init.push_back(intern(atom));
    words = (atoms.size() + 63) / 64;
    initial.assign(words, 0);
    for (int i : init) set(initial, i);
  }

  struct Op {
    std::vector<int> pre_true, pre_false, add, del;
    std::vector<std::vector<std::pair<int, bool>>> forbidden;
  };
  using State = std::vector<uint64_t>;

  static bool test(const State& s, int i) { return (s[i / 64] >> (i % 64)) & 1; }
  static void set(State& s, int i) { s[i / 64] |= uint64_t{1} << (i % 64); }
  static void clear(State& s, int i) { s[i / 64] &= ~(uint64_t{1} << (i % 64)); }

  bool applicable(const Op& op, const State& s) const {
    for (int i : op.pre_true)
      if (!test(s, i)) return false;
    for (int i : op.pre_false)
      if (test(s, i)) return false;
    for (const auto& conj : op.forbidden)
      if (std::all_of(conj.begin(), conj.end(), [&](auto p) { return test(s, p.first) == p.second; }))
        return false;
    return true;
  }

  State apply(const Op& op, const State& s) const {
    State n = s;
    for (int i : op.del) clear(n, i);
    for (int i : op.add) set(n, i);
    return n;
  }

  bool is_goal(const State& s) const {
    for (int i : goal_true)
      if (!test(s, i)) return false;
    for (int i : goal_false)
      if (test(s, i)) return false;
    return true;
  }

  static constexpr int kInf = std::numeric_limits<int>::max() / 4;

  struct Estimate {
    int h_max = 0;
    int h_add = 0;
  };

  // Delete-relaxation estimates: max and additive cost of the goal atoms,
  // both kInf when some goal atom is unreachable even ignoring deletes.
  Estimate estimate(const State& s) const {
    thread_local std::vector<int> cmax, cadd;
    cmax.assign(atoms.size(), kInf);
    cadd.assign(atoms.size(), kInf);
    for (size_t i = 0; i < atoms.size(); ++i)
      if (test(s, static_cast<int>(i))) cmax[i] = cadd[i] = 0;
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& op : ops) {
        int m = 0, a = 0;
        bool reachable = true;
        for (int i : op.pre_true) {
          if (cadd[i] >= kInf) {
            reachable = false;
            break;
          }
          m = std::max(m, cmax[i]);
          a += cadd[i];
        }
        if (!reachable) continue;
        for (int i : op.add) {
          if (m + 1 < cmax[i]) cmax[i] = m + 1, changed = true;
          if (a + 1 < cadd[i]) cadd[i] = a + 1, changed = true;
        }
      }
    }
    Estimate e;
    for (int i : goal_true) {
      if (cadd[i] >= kInf) return {kInf, kInf};
      e.h_max = std::max(e.h_max, cmax[i]);
      e.h_add += cadd[i];
    }
    return e;
  }

  std::vector<Op> ops;
  std::vector<int> goal_true, goal_false;
  State initial;
  size_t words = 0;

 private:
  int intern(const Atom& a) {
    auto [it, inserted] = index.emplace(a, static_cast<int>(atoms.size()));
    if (inserted) atoms.push_back(a);
    return it->second;
  }
  std::map<Atom, int> index;
  std::vector<Atom> atoms;
};

std::string key_of(const Compiled::State& s) {
  return std::string(reinterpret_cast<const char*>(s.data()), s.size() * sizeof(uint64_t));
}

bool mentions(const Atom& atom, const std::set<std::string>& objects) {
  return std::any_of(atom.args.begin(), atom.args.end(),
                     [&](const std::string& a) { return objects.count(a) > 0; });
}

std::string belief_key(const BeliefState& b) {
  std::string k;
  for (const auto& [atom, v] : b.entries)
    if (v == TruthValue::kTrue) k += atom.key() + ';';
  k += '|';
  for (const auto& [id, cat] : b.known_instances) k += id + ':' + cat + ';';
  return k;
}

bool location_predicate(const std::string& p) {
  return p == "On" || p == "Inside" || p == "objectInRoom" || p == "isVisible";
}

}  // namespace

ClassicalDomain determinize(const Domain& domain) {
  ClassicalDomain cd{domain, {}};
  for (const auto& s : domain.schemas) {
    ClassicalSchema c{s.name, s.parameters, {}, {}, {}, {}};
    for (const auto& cond : s.blocking_conditions) {
      if (cond.trigger.size() == 1)
        c.preconditions.push_back({cond.trigger[0].atom, negate(cond.trigger[0].value)});
      else if (!cond.trigger.empty())
        c.forbidden.push_back(cond.trigger);
    }
    for (const auto& e : s.effects) {
      const bool bound = bound_atom(e.atom, s.parameters);
      switch (e.value) {
        case TruthValue::kTrue: c.add.push_back(e.atom); break;
        case TruthValue::kFalse:
        case TruthValue::kPossiblyFalse: c.del.push_back(e.atom); break;
        case TruthValue::kPossiblyTrue:
          if (bound) c.add.push_back(e.atom);
          break;
        case TruthValue::kUnknown: break;
      }
    }
    cd.schemas.push_back(std::move(c));
  }
  return cd;
}

std::vector<ClassicalAction> ground_classical(const ClassicalDomain& cd,
                                              const InstanceTable& instances) {
  std::vector<ClassicalAction> out;
  for (const auto& s : cd.schemas) {
    GroundedAction a{s.name, std::vector<std::string>(s.parameters.size())};
    std::function<void(size_t)> rec = [&](size_t i) {
      if (i == s.parameters.size()) {
        if (auto g = ground_with(cd, s, a, instances)) out.push_back(std::move(*g));
        return;
      }
      for (const auto& [id, cat] : instances) {
        if (!accepts(s.parameters[i].categories, cat)) continue;
        a.args[i] = id;
        rec(i + 1);
      }
    };
    rec(0);
  }
  return out;
}

PlanEpisode plan(const ClassicalDomain& domain, const BeliefState& belief,
                 const std::vector<Literal>& goal, const PlanOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  PlanEpisode ep;
  const auto actions = ground_classical(domain, belief.known_instances);
  const Compiled c(actions, belief, goal);

  struct SearchNode {
    Compiled::State state;
    int parent;
    int op;
    int g;
  };
  struct Entry {
    int f, h;  // f = g + h_max, h = h_add
    int64_t seq;
    int node;
    bool operator>(const Entry& o) const {
      if (f != o.f) return f > o.f;
      if (h != o.h) return h > o.h;
      return seq > o.seq;
    }
  };
  std::vector<SearchNode> nodes;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::unordered_map<std::string, int> best_g;
  int64_t seq = 0;
  auto push = [&](Compiled::State s, int parent, int op, int g) {
    const auto e = c.estimate(s);
    nodes.push_back({std::move(s), parent, op, g});
    open.push({e.h_max >= Compiled::kInf ? Compiled::kInf : g + e.h_max, e.h_add, seq++,
               static_cast<int>(nodes.size()) - 1});
  };
  push(c.initial, -1, -1, 0);
  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    const std::string key = key_of(nodes[top.node].state);
    const int g = nodes[top.node].g;
    if (auto it = best_g.find(key); it != best_g.end() && it->second <= g) continue;
    if (ep.nodes_expanded >= options.max_expansions) {
      ep.hit_limit = true;
      break;
    }
    best_g[key] = g;
    ++ep.nodes_expanded;
    if (c.is_goal(nodes[top.node].state)) {
      for (int n = top.node; nodes[n].parent >= 0; n = nodes[n].parent)
        ep.plan.push_back(actions[nodes[n].op].action);
      std::reverse(ep.plan.begin(), ep.plan.end());
      ep.solved = true;
      break;
    }
    for (size_t i = 0; i < c.ops.size(); ++i) {
      if (!c.applicable(c.ops[i], nodes[top.node].state)) continue;
      Compiled::State next = c.apply(c.ops[i], nodes[top.node].state);
      if (auto it = best_g.find(key_of(next)); it != best_g.end() && it->second <= g + 1)
        continue;
      push(std::move(next), top.node, static_cast<int>(i), g + 1);
    }
  }
  ep.search_time = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - start);
  return ep;
}

bool plan_valid(const ClassicalDomain& domain, const BeliefState& belief,
                const std::vector<Literal>& goal, const std::vector<GroundedAction>& steps) {
  std::set<Atom> state;
  for (const auto& [atom, v] : belief.entries)
    if (v == TruthValue::kTrue) state.insert(atom);
  for (const auto& step : steps) {
    auto a = ground_one(domain, step, belief.known_instances);
    if (!a) return false;
    for (const auto& x : a->pre_true)
      if (!state.count(x)) return false;
    for (const auto& x : a->pre_false)
      if (state.count(x)) return false;
    for (const auto& f : a->forbidden)
      if (std::all_of(f.begin(), f.end(), [&](const Literal& l) {
            return state.count(l.atom) == (l.value == TruthValue::kTrue ? 1u : 0u);
          }))
        return false;
    for (const auto& x : a->del) state.erase(x);
    for (const auto& x : a->add) state.insert(x);
  }
  return std::all_of(goal.begin(), goal.end(), [&](const Literal& l) {
    return state.count(l.atom) == (certain(l.value) == TruthValue::kTrue ? 1u : 0u);
  });
}

std::vector<std::string> goal_objects(const Problem& problem) {
  std::set<std::string> out;
  for (const auto& l : problem.goal)
    for (const auto& a : l.atom.args)
      if (const Instance* i = problem.instance(a); i && (i->category == "item" || i->category == "tool"))
        out.insert(a);
  return {out.begin(), out.end()};
}

Problem strip_locations(const Problem& problem, const std::vector<std::string>& objects) {
  const std::set<std::string> objs(objects.begin(), objects.end());
  Problem out = problem;
  std::erase_if(out.initial_known, [&](const Literal& l) {
    return location_predicate(l.atom.predicate) && mentions(l.atom, objs);
  });
  return out;
}

BeliefState strip_locations(const BeliefState& belief, const std::vector<std::string>& objects) {
  const std::set<std::string> objs(objects.begin(), objects.end());
  BeliefState out = belief;
  std::erase_if(out.entries, [&](const auto& entry) {
    return location_predicate(entry.first.predicate) && mentions(entry.first, objs);
  });
  return out;
}

TrialRecord replan_execute(sim::World& world, const Domain& domain, const Problem& problem,
                           Observability observability, int budget, const PlanOptions& options) {
  if (budget < 1) throw Error(ErrorCode::kConfig, "max_actions must be >= 1");
  const bool limited = observability == Observability::kLimited;
  TrialRecord rec;
  rec.task = problem.name;
  rec.condition = limited ? "ffreplan-limited" : "ffreplan";
  rec.max_actions = budget;

  const ClassicalDomain cd = determinize(domain);
  const auto objects = goal_objects(problem);
  BeliefState belief;
  belief.known_instances = declared_instances(domain, problem);
  for (const auto& l : problem.initial_known) belief.entries[l.atom] = l.value;
  belief = apply_observation(belief, world.initial_observation());

  std::deque<GroundedAction> pending;
  std::map<std::string, PlanEpisode> episodes;
  std::string trigger = "initial";
  LoopDetector loops;
  int steps = 0;
  while (true) {
    if (world.goal_satisfied(problem.goal)) {
      rec.result = TrialResult::kSuccess;
      break;
    }
    if (steps >= budget) {
      rec.result = TrialResult::kBudgetExhausted;
      break;
    }
    if (pending.empty()) {
      if (!limited) belief = apply_observation(belief, Observation{world.location_facts(), {}});
      const BeliefState view = limited ? strip_locations(belief, objects) : belief;
      // plan() is a pure function of the belief, so repeated episodes from
      // an identical belief reuse the earlier search (same plan, same count).
      const std::string key = belief_key(view);
      auto memo = episodes.find(key);
      if (memo == episodes.end())
        memo = episodes.emplace(key, plan(cd, view, problem.goal, options)).first;
      const PlanEpisode& ep = memo->second;
      rec.episodes.push_back({steps, trigger, ep.solved, ep.nodes_expanded,
                              static_cast<int>(ep.plan.size())});
      if (!ep.solved) {
        rec.result = TrialResult::kUnsolvable;
        break;
      }
      if (ep.plan.empty()) {  // the belief claims a goal the world denies
        rec.result = TrialResult::kDeadEnd;
        break;
      }
      pending.assign(ep.plan.begin(), ep.plan.end());
    }
    const GroundedAction action = pending.front();
    pending.pop_front();
    loops.record(belief, action.text());
    sim::ExecResult r = world.execute(action);
    belief = apply_observation(belief, r.observation);
    StepRecord step;
    step.index = steps++;
    step.action = action.text();
    step.outcome = r.outcome;
    if (r.condition) step.condition = r.condition->name;
    step.error = r.error;
    step.observation = r.observation;
    rec.steps.push_back(std::move(step));

    if (r.outcome != sim::Outcome::kSuccess) {
      trigger = r.outcome == sim::Outcome::kBlocked ? "blocked" : "error";
      pending.clear();
      continue;
    }
    if (auto expected = ground_one(cd, action, belief.known_instances)) {
      const bool surprise =
          std::any_of(expected->bound_add.begin(), expected->bound_add.end(),
                      [&](const Atom& a) { return belief.lookup(a) == TruthValue::kFalse; }) ||
          std::any_of(expected->bound_del.begin(), expected->bound_del.end(),
                      [&](const Atom& a) { return belief.lookup(a) == TruthValue::kTrue; });
      if (surprise) {
        trigger = "mismatch";
        pending.clear();
      }
    }
  }
  rec.goal_in_truth = world.goal_satisfied(problem.goal);
  rec.goal_in_belief = std::all_of(problem.goal.begin(), problem.goal.end(), [&](const Literal& l) {
    return holds(belief, l) == TruthValue::kTrue;
  });
  rec.loop_detected = loops.detected();
  return rec;
}

}  // namespace bcr::replan
