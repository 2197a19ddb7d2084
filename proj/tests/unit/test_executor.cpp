#include <algorithm>
#include <functional>

#include "core/error.hpp"
#include "doctest.h"
#include "exec/executor.hpp"
#include "fixtures.hpp"
#include "llm/client.hpp"

using namespace bcr;
using bcr::testing::kitchen_domain;
using bcr::testing::milk_domain;
using bcr::testing::task;

namespace {

// Picks the first scripted action that is a candidate; otherwise the first candidate.
class ScriptEngine final : public SelectionEngine {
 public:
  explicit ScriptEngine(std::vector<std::string> script) : script_(std::move(script)) {}
  std::string name() const override { return "script"; }
  Selection select(const SelectionContext& ctx, uint64_t) const override {
    contexts.push_back(ctx);
    for (const auto& s : script_)
      if (std::find(ctx.candidates.begin(), ctx.candidates.end(), s) != ctx.candidates.end())
        return {s, std::nullopt, 0};
    return {ctx.candidates.front(), std::nullopt, 0};
  }
  mutable std::vector<SelectionContext> contexts;

 private:
  std::vector<std::string> script_;
};

class ThrowingEngine final : public SelectionEngine {
 public:
  explicit ThrowingEngine(std::function<void()> f) : f_(std::move(f)) {}
  std::string name() const override { return "throwing"; }
  Selection select(const SelectionContext&, uint64_t) const override {
    f_();
    return {};
  }

 private:
  std::function<void()> f_;
};

std::vector<std::string> actions(const TrialRecord& r) {
  std::vector<std::string> out;
  for (const auto& s : r.steps) out.push_back(s.action);
  return out;
}

}  // namespace

TEST_CASE("milk transcript runs to success through the executor") {
  const Problem p = task("milk");
  ScriptEngine engine({"open refrigerator", "visualSearch direction_bias", "grasp milk",
                       "place milk counter"});
  TrialConfig cfg{"milk", 0, 100};
  const auto r = run_trial(cfg, milk_domain(), p, engine);
  CHECK(r.result == TrialResult::kSuccess);
  CHECK(r.goal_in_belief);
  CHECK(r.goal_in_truth);
  CHECK(actions(r) == std::vector<std::string>{"place milk counter", "grasp milk",
                                               "open refrigerator",
                                               "visualSearch direction_bias", "grasp milk",
                                               "place milk counter"});
  CHECK(r.steps[0].outcome == sim::Outcome::kBlocked);
  CHECK(r.steps[0].condition == "not-holding");
  CHECK(r.steps[1].condition == "not-visible");
  CHECK(r.steps[2].candidates.size() == 4);
  CHECK(r.condition == "script");
  CHECK_FALSE(r.runtime_s.has_value());

  // The context seen at the third decision reports the last failure.
  REQUIRE(engine.contexts.size() == 6);
  const auto& ctx = engine.contexts[2];
  REQUIRE(ctx.last_error.has_value());
  CHECK(ctx.last_error->find("grasp milk was blocked") == 0);
  CHECK(ctx.previous_actions == std::vector<std::string>{"place milk counter", "grasp milk"});
  CHECK(ctx.remaining_goals.size() == 1);
  // After grasping, isHolding milk and isVisible milk count as completed.
  const auto& last = engine.contexts[5];
  CHECK(std::count_if(last.completed_subgoals.begin(), last.completed_subgoals.end(),
                      [](const Literal& l) { return l.atom.predicate == "isHolding"; }) == 1);
}

TEST_CASE("budget of one action") {
  ScriptEngine engine({});
  TrialConfig cfg{"milk", 0, 1};
  const auto r = run_trial(cfg, milk_domain(), task("milk"), engine);
  CHECK(r.result == TrialResult::kBudgetExhausted);
  CHECK(r.steps.size() == 1);
  CHECK_FALSE(r.goal_in_truth);
}

TEST_CASE("max_actions below one is a config error") {
  ScriptEngine engine({});
  TrialConfig cfg{"milk", 0, 0};
  CHECK_THROWS_AS(run_trial(cfg, milk_domain(), task("milk"), engine), Error);
}

TEST_CASE("exhausted selection falls back to the tie-break") {
  ThrowingEngine engine([] { throw Error(ErrorCode::kSelectionExhausted, "no"); });
  TrialConfig cfg{"milk", 0, 3};
  const auto r = run_trial(cfg, milk_domain(), task("milk"), engine);
  REQUIRE(r.steps.size() == 3);
  for (const auto& s : r.steps) CHECK(s.fallback);
  CHECK(r.steps[0].action == "place milk counter");
}

TEST_CASE("transport failure ends the trial") {
  ThrowingEngine engine([] { throw llm::TransportError(llm::TransportKind::kNetwork, 0, "down"); });
  TrialConfig cfg{"milk", 0, 10};
  const auto r = run_trial(cfg, milk_domain(), task("milk"), engine);
  CHECK(r.result == TrialResult::kEngineExhausted);
  CHECK(r.steps.empty());
}

TEST_CASE("a non-candidate selection is rejected") {
  class Rogue final : public SelectionEngine {
   public:
    std::string name() const override { return "rogue"; }
    Selection select(const SelectionContext&, uint64_t) const override {
      return {"open oven", std::nullopt, 0};
    }
  } engine;
  TrialConfig cfg{"milk", 0, 10};
  CHECK_THROWS_AS(run_trial(cfg, milk_domain(), task("milk"), engine), Error);
}

TEST_CASE("oracle solves a kitchen task and is deterministic") {
  OracleEngine engine;
  TrialConfig cfg{"coffee", 3, 100};
  const auto a = run_trial(cfg, kitchen_domain(), task("coffee"), engine);
  const auto b = run_trial(cfg, kitchen_domain(), task("coffee"), engine);
  CHECK(a.result == TrialResult::kSuccess);
  CHECK(a.goal_in_belief);
  CHECK(to_jsonl(a) == to_jsonl(b));
  CHECK(a.mean_considered().value() > 0);
}

TEST_CASE("wall clock is opt-in") {
  OracleEngine engine;
  TrialConfig cfg{"mug", 1, 100, true};
  const auto r = run_trial(cfg, kitchen_domain(), task("mug"), engine);
  CHECK(r.runtime_s.has_value());
  CHECK(r.steps.front().elapsed_s.has_value());
}

TEST_CASE("agent summary") {
  BeliefState b;
  CHECK(agent_summary(b) == "I am not holding anything.");
  b.entries[{"inRoom", {"character", "kitchen"}}] = TruthValue::kTrue;
  b.entries[{"isHolding", {"mug_1"}}] = TruthValue::kTrue;
  CHECK(agent_summary(b) == "I am in the kitchen. I am holding mug_1.");
}
