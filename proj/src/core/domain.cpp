#include "core/domain.hpp"

#include <algorithm>

namespace bcr {

bool accepts(const CategorySet& slot, const std::string& category) {
  return std::find(slot.begin(), slot.end(), category) != slot.end();
}

const Parameter* ActionSchema::parameter(const std::string& variable) const {
  for (const auto& p : parameters)
    if (p.variable == variable) return &p;
  return nullptr;
}

const BlockingCondition* ActionSchema::condition(const std::string& n) const {
  for (const auto& c : blocking_conditions)
    if (c.name == n) return &c;
  return nullptr;
}

const Predicate* Domain::predicate(const std::string& n) const {
  for (const auto& p : predicates)
    if (p.name == n) return &p;
  return nullptr;
}

const ActionSchema* Domain::schema(const std::string& n) const {
  for (const auto& s : schemas)
    if (s.name == n) return &s;
  return nullptr;
}

bool Domain::has_category(const std::string& n) const {
  return std::find(categories.begin(), categories.end(), n) != categories.end();
}

const Instance* Problem::instance(const std::string& id) const {
  for (const auto& i : instances)
    if (i.id == id) return &i;
  return nullptr;
}

InstanceTable declared_instances(const Domain& domain, const Problem& problem) {
  InstanceTable table;
  for (const auto& c : domain.constants) table[c.id] = c.category;
  for (const auto& i : problem.instances) table[i.id] = i.category;
  return table;
}

}  // namespace bcr
