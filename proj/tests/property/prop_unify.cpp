#include <algorithm>

#include "core/belief.hpp"
#include "core/error.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "gen.hpp"

using namespace bcr;
using bcr::prop::Gen;
using bcr::prop::kCases;

namespace {

InstanceTable kitchen_instances() {
  InstanceTable t;
  for (const char* name : {"coffee", "apple", "mug", "toast"}) {
    const auto d = declared_instances(testing::kitchen_domain(), testing::task(name));
    t.insert(d.begin(), d.end());
  }
  return t;
}

// Independent statement of when an effect can produce a target: same
// predicate and arity, constants agree, a variable always stands for the
// same instance, and the value agrees once possibly_* is read as certain.
bool should_unify(const Literal& effect, const Literal& target) {
  if (effect.atom.predicate != target.atom.predicate) return false;
  if (effect.atom.args.size() != target.atom.args.size()) return false;
  if (certain(effect.value) != target.value) return false;
  for (size_t i = 0; i < effect.atom.args.size(); ++i) {
    const auto& e = effect.atom.args[i];
    if (!is_variable(e) && e != target.atom.args[i]) return false;
    for (size_t j = 0; j < i; ++j)
      if (effect.atom.args[j] == e && target.atom.args[j] != target.atom.args[i]) return false;
  }
  return true;
}

Literal random_target(Gen& g, const Domain& d, const InstanceTable& inst,
                      const std::vector<std::string>& all_ids, const Literal* near) {
  Literal t;
  const Predicate* p = near && g.coin(0.7) ? d.predicate(near->atom.predicate) : &g.pick(d.predicates);
  t.atom.predicate = p->name;
  for (size_t i = 0; i < p->arity(); ++i) {
    auto ids = prop::ids_of(inst, p->parameter_categories[i]);
    t.atom.args.push_back(g.coin(0.85) && !ids.empty() ? g.pick(ids) : g.pick(all_ids));
  }
  t.value = near && g.coin(0.6) ? certain(near->value) : g.value(true);
  return t;
}

}  // namespace

TEST_CASE("unification is sound and complete against the reference rule") {
  const Domain& d = testing::kitchen_domain();
  const auto inst = kitchen_instances();
  std::vector<std::string> all_ids;
  for (const auto& [id, c] : inst) all_ids.push_back(id);
  Gen g(0x51);
  int matched = 0;
  for (int n = 0; n < kCases; ++n) {
    CAPTURE(n);
    const ActionSchema& s = g.pick(d.schemas);
    const Literal& effect = g.pick(s.effects);
    const Literal target = random_target(g, d, inst, all_ids, &effect);
    const auto b = unify_effect(effect, target);
    CHECK(b.has_value() == should_unify(effect, target));
    if (!b) continue;
    ++matched;
    const Literal sub = substitute(effect, *b);
    CHECK(sub.atom == target.atom);
    CHECK(certain(sub.value) == target.value);
    for (const auto& [var, val] : *b) CHECK(is_variable(var));
  }
  CHECK(matched > kCases / 5);
}

TEST_CASE("grounding is total on full bindings and fails on partial ones") {
  const Domain& d = testing::kitchen_domain();
  const auto inst = kitchen_instances();
  Gen g(0x52);
  for (int n = 0; n < kCases; ++n) {
    CAPTURE(n);
    const ActionSchema& s = g.pick(d.schemas);
    Bindings b;
    bool possible = true;
    for (const auto& p : s.parameters) {
      const auto ids = prop::ids_of(inst, p.categories);
      if (ids.empty()) possible = false;
      else b[p.variable] = g.pick(ids);
    }
    if (!possible) continue;
    const GroundedAction a = ground(s, b, inst);
    CHECK(a.schema == s.name);
    REQUIRE(a.args.size() == s.parameters.size());
    for (size_t i = 0; i < a.args.size(); ++i) CHECK(a.args[i] == b[s.parameters[i].variable]);
    CHECK(a.bindings(s) == b);
    if (s.parameters.empty()) continue;
    Bindings partial = b;
    partial.erase(g.pick(s.parameters).variable);
    try {
      ground(s, partial, inst);
      FAIL("partial binding grounded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kMissingBinding);
    }
  }
}

TEST_CASE("certain achievers are a subset of possible achievers") {
  const Domain& d = testing::kitchen_domain();
  const auto inst = kitchen_instances();
  std::vector<std::string> all_ids;
  for (const auto& [id, c] : inst) all_ids.push_back(id);
  Gen g(0x53);
  for (int n = 0; n < kCases; ++n) {
    CAPTURE(n);
    InstanceTable known;
    for (const auto& [id, c] : inst)
      if (g.coin(0.6)) known[id] = c;
    const Literal target = random_target(g, d, inst, all_ids, nullptr);
    const auto sure = achievers(target, d, known, AchieverMode::kCertainOnly);
    const auto maybe = achievers(target, d, known, AchieverMode::kIncludePossible);
    CHECK(std::is_sorted(maybe.begin(), maybe.end(),
                         [](const auto& a, const auto& b) { return a.text() < b.text(); }));
    for (const auto& a : sure) CHECK(std::find(maybe.begin(), maybe.end(), a) != maybe.end());
    // Every achiever has an effect that, with its parameters bound,
    // unifies with the target.
    for (const auto& a : maybe) {
      const ActionSchema& s = *d.schema(a.schema);
      const Bindings params = a.bindings(s);
      CHECK_MESSAGE(std::any_of(s.effects.begin(), s.effects.end(),
                                [&](const Literal& e) {
                                  return unify_effect(substitute(e, params), target).has_value();
                                }),
                    a.text() << " for " << target.to_string());
    }
  }
}

TEST_CASE("observations: idempotent, monotone, last write wins") {
  const Domain& d = testing::kitchen_domain();
  const auto inst = kitchen_instances();
  std::vector<std::string> all_ids;
  std::vector<Instance> all_instances;
  for (const auto& [id, c] : inst) {
    all_ids.push_back(id);
    all_instances.push_back({id, c});
  }
  Gen g(0x54);
  for (int n = 0; n < kCases; ++n) {
    CAPTURE(n);
    BeliefState b;
    std::map<Atom, TruthValue> last;
    const int rounds = g.range(1, 6);
    for (int r = 0; r < rounds; ++r) {
      Observation o;
      const int k = g.range(0, 8);
      for (int i = 0; i < k; ++i) {
        Literal l = random_target(g, d, inst, all_ids, nullptr);
        o.literals.push_back(l);
        last[l.atom] = l.value;
      }
      for (int i = g.range(0, 2); i > 0; --i) o.revealed.push_back(g.pick(all_instances));
      const BeliefState before = b;
      b = apply_observation(b, o);
      CHECK(apply_observation(b, o) == b);
      for (const auto& [id, c] : before.known_instances) CHECK(b.known_instances.count(id) == 1);
      for (const auto& i : o.revealed) CHECK(b.known_instances.count(i.id) == 1);
    }
    CHECK(b.entries.size() == last.size());
    for (const auto& [atom, v] : last) {
      CHECK(holds(b, {atom, v}) == TruthValue::kTrue);
      const TruthValue other = v == TruthValue::kTrue ? TruthValue::kFalse : TruthValue::kTrue;
      CHECK(holds(b, {atom, other}) == TruthValue::kFalse);
    }
    const Literal fresh = random_target(g, d, inst, all_ids, nullptr);
    if (!last.count(fresh.atom)) CHECK(holds(b, fresh) == TruthValue::kUnknown);
  }
}
