#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/literal.hpp"
#include "llm/client.hpp"

namespace bcr {

/// Ground-truth probe handed to the scripted oracle. Test-only: nothing
/// else may look behind the observations.
class OracleView {
 public:
  struct Probe {
    bool success = false;  // executed without being blocked or failing
    bool blocked = false;
    std::optional<int> distance_after;
  };
  virtual ~OracleView() = default;
  virtual Probe probe(const std::string& action) const = 0;
  virtual std::optional<int> distance() const = 0;
  /// Goal objects whose location the agent does not know yet and that are
  /// not shut inside a container.
  virtual std::vector<std::string> unlocated_goal_objects() const = 0;
};

struct SelectionContext {
  std::vector<std::string> candidates;
  std::vector<std::string> previous_actions;
  std::vector<Literal> completed_subgoals;
  std::vector<Literal> remaining_goals;
  std::optional<std::string> last_error;
  std::string agent_summary;
  const OracleView* oracle = nullptr;
};

struct Selection {
  std::string action;
  std::optional<std::string> rationale;
  int retries_used = 0;
};

class SelectionEngine {
 public:
  virtual ~SelectionEngine() = default;
  virtual std::string name() const = 0;
  /// Returns a member of ctx.candidates. Throws Validation on an empty list.
  virtual Selection select(const SelectionContext& ctx, uint64_t rng_seed) const = 0;
};

/// Scripted policy: an unblocked candidate that shortens the true distance
/// to the goal; else a scanroom for an unlocated goal object; else a
/// candidate that will block (exposing its resolution actions); else the
/// lexicographically first.
class OracleEngine final : public SelectionEngine {
 public:
  std::string name() const override { return "oracle"; }
  Selection select(const SelectionContext& ctx, uint64_t rng_seed) const override;
  /// Fallback used after an LLM exhausts its retries (no probe needed).
  static std::string tie_break(const std::vector<std::string>& candidates);
};

class RandomEngine final : public SelectionEngine {
 public:
  std::string name() const override { return "random"; }
  Selection select(const SelectionContext& ctx, uint64_t rng_seed) const override;
};

class LlmEngine final : public SelectionEngine {
 public:
  LlmEngine(std::shared_ptr<llm::ChatClient> client, std::string model,
            int retry_budget = 3, double temperature = 0.0);
  std::string name() const override { return "llm"; }
  Selection select(const SelectionContext& ctx, uint64_t rng_seed) const override;

 private:
  std::shared_ptr<llm::ChatClient> client_;
  std::string model_;
  int retry_budget_;
  double temperature_;
};

inline constexpr const char* kSystemPrompt =
    "You are helping me select my next action, take your time and verify that the "
    "action you select is part of the list I provide. Take your time and go step by step.";
inline constexpr const char* kCorrectiveNote = "Please only select actions in the list I provided.";

std::vector<llm::ChatMessage> build_prompt(const SelectionContext& ctx);

/// Trimmed content of the first `$$ ... $$` span.
std::optional<std::string> parse_selection(const std::string& text);

/// One fresh prompt per decision; a response outside the candidate list is
/// answered with the corrective note, at most `retry_budget` times.
/// Throws SelectionExhausted; transport errors pass through.
Selection llm_select(const SelectionContext& ctx, const llm::ChatClient& client,
                     const std::string& model, int retry_budget,
                     double temperature = 0.0);

}  // namespace bcr
