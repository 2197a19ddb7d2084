#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core/literal.hpp"

namespace bcr {

struct Instance {
  std::string id;
  std::string category;

  auto operator<=>(const Instance&) const = default;
  bool operator==(const Instance&) const = default;
};

// Accepted categories for one argument slot. A single entry is the common
// case; more than one comes from `(either a b)` in a domain file.
using CategorySet = std::vector<std::string>;

bool accepts(const CategorySet& slot, const std::string& category);

struct Predicate {
  std::string name;
  std::vector<CategorySet> parameter_categories;

  size_t arity() const { return parameter_categories.size(); }
  bool operator==(const Predicate&) const = default;
};

struct Parameter {
  std::string variable;  // "?o"
  CategorySet categories;

  bool operator==(const Parameter&) const = default;
};

struct BlockingCondition {
  std::string name;
  std::vector<Literal> trigger;
  std::vector<Literal> resolution;

  bool operator==(const BlockingCondition&) const = default;
};

struct ActionSchema {
  std::string name;
  std::vector<Parameter> parameters;
  std::vector<Literal> effects;
  std::vector<BlockingCondition> blocking_conditions;
  bool repeatable = false;

  const Parameter* parameter(const std::string& variable) const;
  const BlockingCondition* condition(const std::string& name) const;
  bool operator==(const ActionSchema&) const = default;
};

struct Domain {
  std::string name;
  std::vector<std::string> categories;
  std::vector<Instance> constants;
  std::vector<Predicate> predicates;
  std::vector<ActionSchema> schemas;

  const Predicate* predicate(const std::string& name) const;
  const ActionSchema* schema(const std::string& name) const;
  bool has_category(const std::string& name) const;
  bool operator==(const Domain&) const = default;
};

struct Problem {
  std::string name;
  std::string domain_name;
  std::vector<Instance> instances;
  std::vector<Literal> initial_known;
  std::vector<Literal> goal;

  const Instance* instance(const std::string& id) const;
  bool operator==(const Problem&) const = default;
};

/// id -> category for every instance the agent can currently name.
using InstanceTable = std::map<std::string, std::string>;

/// Domain constants plus the problem's declared objects.
InstanceTable declared_instances(const Domain& domain, const Problem& problem);

}  // namespace bcr
