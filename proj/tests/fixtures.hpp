#pragma once

#include <string>

#include "core/domain.hpp"
#include "parser/domain_parser.hpp"

namespace bcr::testing {

inline std::string repo_path(const std::string& rel) {
  return std::string(BCR_SOURCE_DIR) + "/" + rel;
}

inline const Domain& kitchen_domain() {
  static const Domain d = parser::load_domain(repo_path("domains/kitchen.bcr"));
  return d;
}

inline const Domain& milk_domain() {
  static const Domain d = parser::load_domain(repo_path("domains/milk.bcr"));
  return d;
}

inline Problem task(const std::string& name) {
  const Domain& d = name == "milk" ? milk_domain() : kitchen_domain();
  return parser::load_problem(repo_path("tasks/" + name + ".bcr"), d);
}

}  // namespace bcr::testing
