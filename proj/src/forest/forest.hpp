#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core/belief.hpp"
#include "core/domain.hpp"
#include "core/grounding.hpp"
#include "json.hpp"

namespace bcr {

enum class NodeStatus { kFresh, kBlocked };

const char* to_string(NodeStatus status);

struct Node {
  int id = 0;
  GroundedAction action;
  std::optional<int> parent;
  std::vector<int> children;
  NodeStatus status = NodeStatus::kFresh;
  std::optional<GroundCondition> condition;  // set iff kBlocked
  int attempts = 0;
  std::optional<Literal> goal;  // roots only
  // Every action ever attached under the current blocking condition, so a
  // child removed by an unresolved success is not re-added by refresh().
  std::set<GroundedAction> tried;
};

struct Candidate {
  int node = 0;
  GroundedAction action;
  bool operator==(const Candidate&) const = default;
};

/// Roots achieve goal literals; a blocked node's children are the actions
/// that may resolve its blocking condition; leaves are the candidates.
class ResolutionForest {
 public:
  ResolutionForest() = default;

  /// Throws NoAchiever when an unsatisfied goal literal has no achiever.
  static ResolutionForest init(const std::vector<Literal>& goal,
                               const Domain& domain, const BeliefState& state);

  /// Childless nodes in depth-first order over roots, children in the
  /// order they were added.
  std::vector<Candidate> candidates() const;

  void on_blocked(int node, const GroundCondition& condition,
                  const Domain& domain, const BeliefState& state);
  void on_success(int node, const Domain& domain, const BeliefState& state);
  /// The action could not be executed at all (not blocked: malformed for
  /// this world). The leaf is dropped; a parent left without children
  /// becomes a candidate again.
  void on_error(int node);
  void refresh(const Domain& domain, const BeliefState& state);

  bool empty() const { return roots_.empty(); }
  bool contains(int node) const { return nodes_.count(node) > 0; }
  const Node& node(int id) const;
  const std::vector<int>& roots() const { return roots_; }
  const std::map<int, Node>& nodes() const { return nodes_; }
  const std::vector<Literal>& goal() const { return goal_; }
  /// Goal literals whose every tree died for lack of resolution actions.
  const std::set<Literal>& dead_goals() const { return dead_goals_; }

  nlohmann::json to_json() const;

 private:
  int add_node(GroundedAction action, std::optional<int> parent,
               std::optional<Literal> goal);
  void add_roots(const Literal& goal, const Domain& domain,
                 const BeliefState& state);
  void expand(Node& node, const Domain& domain, const BeliefState& state);
  void remove_subtree(int id);
  void detach(int id);
  void remove_dead(int id);
  bool on_path(int id, const GroundedAction& action) const;
  nlohmann::json node_json(int id) const;

  std::vector<Literal> goal_;
  std::vector<int> roots_;
  std::map<int, Node> nodes_;
  std::set<Literal> dead_goals_;
  size_t known_at_death_ = 0;
  int next_id_ = 0;
};

}  // namespace bcr
