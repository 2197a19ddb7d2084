#pragma once

#include <string>
#include <string_view>

#include "core/domain.hpp"
#include "core/grounding.hpp"

namespace bcr::parser {

Domain parse_domain(std::string_view text);
Problem parse_problem(std::string_view text, const Domain& domain);

std::string render_domain(const Domain& domain);
std::string render_problem(const Problem& problem);

std::string render_action(const GroundedAction& action);
GroundedAction parse_action(std::string_view text, const Domain& domain,
                            const InstanceTable& known);

Domain load_domain(const std::string& path);
Problem load_problem(const std::string& path, const Domain& domain);

}  // namespace bcr::parser
