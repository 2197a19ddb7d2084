#include "core/grounding.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "core/error.hpp"

namespace bcr {

namespace {

bool value_supports(TruthValue effect, TruthValue target) {
  return effect == target ||
         (effect == TruthValue::kPossiblyTrue && target == TruthValue::kTrue) ||
         (effect == TruthValue::kPossiblyFalse && target == TruthValue::kFalse);
}

bool bound_by_parameters(const ActionSchema& schema, const Atom& atom) {
  return std::all_of(atom.args.begin(), atom.args.end(),
                     [&](const std::string& a) {
                       return !is_variable(a) || schema.parameter(a) != nullptr;
                     });
}

// Unify a schema atom against a ground atom. Variables bind to the ground
// argument at their position; repeated variables must agree.
std::optional<Bindings> unify_atom(const Atom& pattern, const Atom& ground,
                                   Bindings seed = {}) {
  if (pattern.predicate != ground.predicate ||
      pattern.args.size() != ground.args.size())
    return std::nullopt;
  for (size_t i = 0; i < pattern.args.size(); ++i) {
    const auto& p = pattern.args[i];
    const auto& g = ground.args[i];
    if (!is_variable(p)) {
      if (p != g) return std::nullopt;
      continue;
    }
    auto [it, inserted] = seed.emplace(p, g);
    if (!inserted && it->second != g) return std::nullopt;
  }
  return seed;
}

}  // namespace

std::string GroundedAction::text() const {
  std::string out = schema;
  for (const auto& a : args) {
    out += ' ';
    out += a;
  }
  return out;
}

Bindings GroundedAction::bindings(const ActionSchema& s) const {
  Bindings b;
  for (size_t i = 0; i < s.parameters.size() && i < args.size(); ++i)
    b[s.parameters[i].variable] = args[i];
  return b;
}

GroundedAction ground(const ActionSchema& schema, const Bindings& bindings,
                      const InstanceTable& instances) {
  GroundedAction action{schema.name, {}};
  for (const auto& p : schema.parameters) {
    auto it = bindings.find(p.variable);
    if (it == bindings.end())
      throw Error(ErrorCode::kMissingBinding,
                  schema.name + ": no binding for " + p.variable);
    auto inst = instances.find(it->second);
    if (inst == instances.end())
      throw Error(ErrorCode::kUnknownInstance,
                  schema.name + ": unknown instance " + it->second);
    if (!accepts(p.categories, inst->second))
      throw Error(ErrorCode::kCategoryMismatch,
                  schema.name + ": " + it->second + " is a " + inst->second);
    action.args.push_back(it->second);
  }
  return action;
}

Literal substitute(const Literal& literal, const Bindings& bindings) {
  Literal out = literal;
  for (auto& a : out.atom.args) {
    if (!is_variable(a)) continue;
    if (auto it = bindings.find(a); it != bindings.end()) a = it->second;
  }
  return out;
}

std::optional<Bindings> unify_effect(const Literal& effect,
                                     const Literal& target) {
  if (!value_supports(effect.value, target.value)) return std::nullopt;
  return unify_atom(effect.atom, target.atom);
}

std::optional<TruthValue> effect_on(const ActionSchema& schema,
                                    const GroundedAction& action,
                                    const Atom& atom) {
  const Bindings params = action.bindings(schema);
  std::optional<TruthValue> quantified;
  for (const auto& e : schema.effects) {
    if (bound_by_parameters(schema, e.atom)) {
      if (substitute(e, params).atom == atom) return e.value;
    } else if (!quantified && unify_atom(e.atom, atom, params)) {
      quantified = e.value;
    }
  }
  return quantified;
}

std::vector<Literal> ground_effects(const Domain& domain,
                                    const ActionSchema& schema,
                                    const GroundedAction& action,
                                    const InstanceTable& instances) {
  const Bindings params = action.bindings(schema);
  std::map<Atom, TruthValue> quantified;
  std::map<Atom, TruthValue> bound;
  for (const auto& e : schema.effects) {
    Literal partial = substitute(e, params);
    if (partial.is_ground()) {
      bound[partial.atom] = partial.value;
      continue;
    }
    const Predicate* pred = domain.predicate(e.atom.predicate);
    if (!pred) continue;
    // Enumerate each remaining variable over instances its slot accepts.
    std::function<void(size_t, Literal&)> expand = [&](size_t i, Literal& l) {
      if (i == l.atom.args.size()) {
        quantified.emplace(l.atom, l.value);
        return;
      }
      if (!is_variable(l.atom.args[i])) return expand(i + 1, l);
      const std::string var = l.atom.args[i];
      for (const auto& [id, cat] : instances) {
        if (!accepts(pred->parameter_categories[i], cat)) continue;
        Literal next = substitute(l, Bindings{{var, id}});
        expand(i + 1, next);
      }
    };
    expand(0, partial);
  }
  for (const auto& [atom, value] : bound) quantified[atom] = value;
  std::vector<Literal> out;
  out.reserve(quantified.size());
  for (const auto& [atom, value] : quantified) out.push_back({atom, value});
  return out;
}

GroundCondition ground_condition(const ActionSchema& schema,
                                 const BlockingCondition& condition,
                                 const GroundedAction& action) {
  const Bindings b = action.bindings(schema);
  GroundCondition out{condition.name, {}, {}};
  for (const auto& l : condition.trigger) out.trigger.push_back(substitute(l, b));
  for (const auto& l : condition.resolution)
    out.resolution.push_back(substitute(l, b));
  return out;
}

std::vector<GroundedAction> achievers(const Literal& target,
                                      const Domain& domain,
                                      const InstanceTable& known,
                                      AchieverMode mode) {
  std::set<GroundedAction> found;
  for (const auto& schema : domain.schemas) {
    for (const auto& effect : schema.effects) {
      if (mode == AchieverMode::kCertainOnly && !is_certain(effect.value))
        continue;
      auto unifier = unify_effect(effect, target);
      if (!unifier) continue;

      // Keep parameter bindings; reject those outside the known set.
      std::vector<std::optional<std::string>> slots;
      bool ok = true;
      for (const auto& p : schema.parameters) {
        auto it = unifier->find(p.variable);
        if (it == unifier->end()) {
          slots.emplace_back();
          continue;
        }
        auto inst = known.find(it->second);
        if (inst == known.end() || !accepts(p.categories, inst->second)) {
          ok = false;
          break;
        }
        slots.emplace_back(it->second);
      }
      if (!ok) continue;

      GroundedAction candidate{schema.name,
                               std::vector<std::string>(slots.size())};
      std::function<void(size_t)> enumerate = [&](size_t i) {
        if (i == slots.size()) {
          // A parameter-bound effect on the same atom overrides this one.
          std::optional<TruthValue> v = effect.value;
          const Bindings params = candidate.bindings(schema);
          for (const auto& e : schema.effects)
            if (bound_by_parameters(schema, e.atom) &&
                substitute(e, params).atom == target.atom)
              v = e.value;
          if (v && value_supports(*v, target.value) &&
              (mode == AchieverMode::kIncludePossible || is_certain(*v)))
            found.insert(candidate);
          return;
        }
        if (slots[i]) {
          candidate.args[i] = *slots[i];
          return enumerate(i + 1);
        }
        for (const auto& [id, cat] : known) {
          if (!accepts(schema.parameters[i].categories, cat)) continue;
          candidate.args[i] = id;
          enumerate(i + 1);
        }
      };
      enumerate(0);
    }
  }
  std::vector<GroundedAction> out(found.begin(), found.end());
  std::sort(out.begin(), out.end(),
            [](const GroundedAction& a, const GroundedAction& b) {
              return a.text() < b.text();
            });
  return out;
}

std::vector<GroundedAction> all_groundings(const Domain& domain,
                                           const InstanceTable& instances) {
  std::vector<GroundedAction> out;
  for (const auto& schema : domain.schemas) {
    GroundedAction a{schema.name,
                     std::vector<std::string>(schema.parameters.size())};
    std::function<void(size_t)> rec = [&](size_t i) {
      if (i == schema.parameters.size()) {
        out.push_back(a);
        return;
      }
      for (const auto& [id, cat] : instances) {
        if (!accepts(schema.parameters[i].categories, cat)) continue;
        a.args[i] = id;
        rec(i + 1);
      }
    };
    rec(0);
  }
  return out;
}

}  // namespace bcr
