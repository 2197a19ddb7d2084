#include "forest/forest.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace bcr {

namespace {

bool satisfied(const BeliefState& state, const Literal& literal) {
  return holds(state, literal) == TruthValue::kTrue;
}

}  // namespace

const char* to_string(NodeStatus status) {
  return status == NodeStatus::kBlocked ? "blocked" : "fresh";
}

ResolutionForest ResolutionForest::init(const std::vector<Literal>& goal,
                                        const Domain& domain,
                                        const BeliefState& state) {
  ResolutionForest f;
  f.goal_ = goal;
  for (const auto& g : goal) {
    if (satisfied(state, g)) continue;
    f.add_roots(g, domain, state);
    if (std::none_of(f.roots_.begin(), f.roots_.end(),
                     [&](int r) { return f.nodes_.at(r).goal == g; }))
      throw Error(ErrorCode::kNoAchiever, "no action achieves " + g.to_string());
  }
  return f;
}

const Node& ResolutionForest::node(int id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::kNotALeaf, "no node " + std::to_string(id));
  return it->second;
}

int ResolutionForest::add_node(GroundedAction action, std::optional<int> parent,
                               std::optional<Literal> goal) {
  const int id = next_id_++;
  Node n;
  n.id = id;
  n.action = std::move(action);
  n.parent = parent;
  n.goal = std::move(goal);
  nodes_.emplace(id, std::move(n));
  if (parent) nodes_.at(*parent).children.push_back(id);
  return id;
}

void ResolutionForest::add_roots(const Literal& goal, const Domain& domain,
                                 const BeliefState& state) {
  auto acts = achievers(goal, domain, state.known_instances, AchieverMode::kCertainOnly);
  if (acts.empty())
    acts = achievers(goal, domain, state.known_instances, AchieverMode::kIncludePossible);
  for (auto& a : acts) roots_.push_back(add_node(std::move(a), std::nullopt, goal));
  auto rank = [&](int r) {
    auto it = std::find(goal_.begin(), goal_.end(), *nodes_.at(r).goal);
    return it - goal_.begin();
  };
  std::stable_sort(roots_.begin(), roots_.end(),
                   [&](int a, int b) { return rank(a) < rank(b); });
}

bool ResolutionForest::on_path(int id, const GroundedAction& action) const {
  for (std::optional<int> cur = id; cur; cur = nodes_.at(*cur).parent)
    if (nodes_.at(*cur).action == action) return true;
  return false;
}

void ResolutionForest::expand(Node& node, const Domain& domain,
                              const BeliefState& state) {
  for (const auto& lit : node.condition->resolution) {
    for (auto& a : achievers(lit, domain, state.known_instances,
                             AchieverMode::kIncludePossible)) {
      if (node.tried.count(a) || on_path(node.id, a)) continue;
      node.tried.insert(a);
      add_node(std::move(a), node.id, std::nullopt);
    }
  }
}

void ResolutionForest::remove_subtree(int id) {
  const std::vector<int> kids = nodes_.at(id).children;
  for (int c : kids) remove_subtree(c);
  nodes_.erase(id);
}

void ResolutionForest::detach(int id) {
  const Node& n = nodes_.at(id);
  if (n.parent) {
    auto& sib = nodes_.at(*n.parent).children;
    sib.erase(std::remove(sib.begin(), sib.end(), id), sib.end());
  } else {
    roots_.erase(std::remove(roots_.begin(), roots_.end(), id), roots_.end());
  }
  remove_subtree(id);
}

// Dead end: nothing can resolve the node's condition. The node goes, and so
// does every ancestor left without children.
void ResolutionForest::remove_dead(int id) {
  const std::optional<int> parent = nodes_.at(id).parent;
  const std::optional<Literal> goal = nodes_.at(id).goal;
  detach(id);
  if (parent) {
    if (nodes_.at(*parent).children.empty()) remove_dead(*parent);
    return;
  }
  const bool others = std::any_of(roots_.begin(), roots_.end(),
                                  [&](int r) { return nodes_.at(r).goal == goal; });
  if (!others) dead_goals_.insert(*goal);
}

std::vector<Candidate> ResolutionForest::candidates() const {
  std::vector<Candidate> out;
  std::vector<int> stack(roots_.rbegin(), roots_.rend());
  while (!stack.empty()) {
    const Node& n = nodes_.at(stack.back());
    stack.pop_back();
    if (n.children.empty()) out.push_back({n.id, n.action});
    stack.insert(stack.end(), n.children.rbegin(), n.children.rend());
  }
  return out;
}

void ResolutionForest::on_blocked(int id, const GroundCondition& condition,
                                  const Domain& domain, const BeliefState& state) {
  auto it = nodes_.find(id);
  if (it == nodes_.end() || !it->second.children.empty())
    throw Error(ErrorCode::kNotALeaf, "node " + std::to_string(id) + " is not a leaf");
  Node& n = it->second;
  ++n.attempts;
  n.status = NodeStatus::kBlocked;
  n.condition = condition;
  n.tried.clear();
  expand(n, domain, state);
  if (n.children.empty()) {
    remove_dead(id);
    known_at_death_ = state.known_instances.size();
  }
}

void ResolutionForest::on_success(int id, const Domain& domain,
                                  const BeliefState& state) {
  auto it = nodes_.find(id);
  if (it == nodes_.end() || !it->second.children.empty())
    throw Error(ErrorCode::kNotALeaf, "node " + std::to_string(id) + " is not a leaf");
  Node& n = it->second;
  ++n.attempts;
  if (!n.parent) {
    if (satisfied(state, *n.goal)) detach(id);  // (a)
    return;
  }
  Node& p = nodes_.at(*n.parent);
  if (condition_resolved(state, *p.condition)) {  // (b)
    const std::vector<int> kids = p.children;
    for (int c : kids) remove_subtree(c);
    p.children.clear();
    p.status = NodeStatus::kFresh;
    p.condition.reset();
    p.tried.clear();
    return;
  }
  const ActionSchema* schema = domain.schema(n.action.schema);
  if (schema && schema->repeatable) return;  // (c), stays a candidate
  detach(id);
  if (p.children.empty()) {
    // Every resolution action ran without resolving the condition: the
    // blocked action becomes a candidate again.
    p.status = NodeStatus::kFresh;
    p.condition.reset();
  }
}

void ResolutionForest::on_error(int id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end() || !it->second.children.empty())
    throw Error(ErrorCode::kNotALeaf, "node " + std::to_string(id) + " is not a leaf");
  const std::optional<int> parent = it->second.parent;
  detach(id);
  if (parent && nodes_.at(*parent).children.empty()) {
    nodes_.at(*parent).status = NodeStatus::kFresh;
    nodes_.at(*parent).condition.reset();
  }
}

void ResolutionForest::refresh(const Domain& domain, const BeliefState& state) {
  if (state.known_instances.size() > known_at_death_) dead_goals_.clear();

  for (int r : std::vector<int>(roots_))
    if (satisfied(state, *nodes_.at(r).goal)) detach(r);

  std::vector<int> ids;
  for (const auto& [id, n] : nodes_) ids.push_back(id);
  for (int id : ids) {
    auto it = nodes_.find(id);
    if (it == nodes_.end() || it->second.status != NodeStatus::kBlocked) continue;
    Node& n = it->second;
    if (condition_resolved(state, *n.condition)) {
      for (int c : std::vector<int>(n.children)) remove_subtree(c);
      n.children.clear();
      n.status = NodeStatus::kFresh;
      n.condition.reset();
      n.tried.clear();
    }
  }

  for (const auto& g : goal_) {
    if (satisfied(state, g) || dead_goals_.count(g)) continue;
    const bool rooted = std::any_of(roots_.begin(), roots_.end(),
                                    [&](int r) { return nodes_.at(r).goal == g; });
    if (rooted) continue;
    add_roots(g, domain, state);
    const bool added = std::any_of(roots_.begin(), roots_.end(),
                                   [&](int r) { return nodes_.at(r).goal == g; });
    if (!added) {
      dead_goals_.insert(g);
      known_at_death_ = state.known_instances.size();
    }
  }

  for (auto& [id, n] : nodes_)
    if (n.status == NodeStatus::kBlocked) expand(n, domain, state);
}

nlohmann::json ResolutionForest::node_json(int id) const {
  const Node& n = nodes_.at(id);
  nlohmann::json j;
  j["id"] = n.id;
  j["action"] = n.action.text();
  j["status"] = to_string(n.status);
  j["condition"] = n.condition ? nlohmann::json(n.condition->name) : nlohmann::json();
  j["attempts"] = n.attempts;
  if (n.goal) j["goal"] = n.goal->to_string();
  j["children"] = nlohmann::json::array();
  for (int c : n.children) j["children"].push_back(node_json(c));
  return j;
}

nlohmann::json ResolutionForest::to_json() const {
  nlohmann::json roots = nlohmann::json::array();
  for (int r : roots_) roots.push_back(node_json(r));
  return {{"roots", roots}};
}

}  // namespace bcr
