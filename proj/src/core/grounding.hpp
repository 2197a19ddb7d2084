#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/domain.hpp"
#include "core/literal.hpp"

namespace bcr {

using Bindings = std::map<std::string, std::string>;

/// A schema with every parameter bound, arguments in parameter order.
struct GroundedAction {
  std::string schema;
  std::vector<std::string> args;

  /// Canonical action string: "walk_to_object fridge_1".
  std::string text() const;
  Bindings bindings(const ActionSchema& schema) const;

  auto operator<=>(const GroundedAction&) const = default;
  bool operator==(const GroundedAction&) const = default;
};

struct GroundCondition {
  std::string name;
  std::vector<Literal> trigger;
  std::vector<Literal> resolution;

  auto operator<=>(const GroundCondition&) const = default;
  bool operator==(const GroundCondition&) const = default;
};

enum class AchieverMode { kCertainOnly, kIncludePossible };

GroundedAction ground(const ActionSchema& schema, const Bindings& bindings,
                      const InstanceTable& instances);

Literal substitute(const Literal& literal, const Bindings& bindings);

std::optional<Bindings> unify_effect(const Literal& effect,
                                     const Literal& target);

/// Effects of `action`: parameter-bound effects are substituted; effects
/// with variables outside the parameter list apply to every compatible
/// instance in `instances`. A bound effect overrides a quantified one on the
/// same atom.
std::vector<Literal> ground_effects(const Domain& domain,
                                    const ActionSchema& schema,
                                    const GroundedAction& action,
                                    const InstanceTable& instances);

/// Value `action` assigns to `atom`, if any (same override rule as above;
/// among quantified effects on one atom the first listed wins).
std::optional<TruthValue> effect_on(const ActionSchema& schema,
                                    const GroundedAction& action,
                                    const Atom& atom);

GroundCondition ground_condition(const ActionSchema& schema,
                                 const BlockingCondition& condition,
                                 const GroundedAction& action);

/// Grounded actions with an effect matching `target`, free parameters
/// enumerated over `known`. Sorted by action text.
std::vector<GroundedAction> achievers(const Literal& target,
                                      const Domain& domain,
                                      const InstanceTable& known,
                                      AchieverMode mode);

/// Every category-respecting grounding of every schema over `instances`.
std::vector<GroundedAction> all_groundings(const Domain& domain,
                                           const InstanceTable& instances);

}  // namespace bcr
