#include <fstream>
#include <random>

#include "core/error.hpp"
#include "doctest.h"
#include "exec/record.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "select/selection.hpp"

using namespace bcr;
using json = nlohmann::json;

namespace {

struct Golden {
  SelectionContext ctx;
  std::vector<llm::ChatMessage> messages;
};

Golden load_golden(const std::string& name) {
  std::ifstream in(bcr::testing::repo_path("fixtures/prompts/" + name + ".json"));
  REQUIRE(in.good());
  const json j = json::parse(in);
  Golden g;
  const auto& c = j.at("context");
  const StepContext sc = step_context_from_json(c);
  g.ctx.candidates = c.at("candidates").get<std::vector<std::string>>();
  g.ctx.previous_actions = sc.previous_actions;
  g.ctx.completed_subgoals = sc.completed_subgoals;
  g.ctx.remaining_goals = sc.remaining_goals;
  g.ctx.last_error = sc.last_error;
  g.ctx.agent_summary = sc.agent_summary;
  for (const auto& m : j.at("messages"))
    g.messages.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
  return g;
}

std::shared_ptr<llm::MockTransport> mock_of(std::vector<std::string> replies) {
  std::vector<llm::HttpReply> script;
  for (const auto& r : replies) script.push_back(llm::MockTransport::reply(r));
  return std::make_shared<llm::MockTransport>(script);
}

llm::ChatClient client_of(std::shared_ptr<llm::MockTransport> mock) {
  llm::ClientConfig cfg;
  cfg.sleep = [](std::chrono::milliseconds) {};
  return llm::ChatClient(mock, cfg);
}

SelectionContext simple_ctx() {
  SelectionContext ctx;
  ctx.candidates = {"scanroom mug_1 kitchen", "walk_to_object fridge_1", "open fridge_1"};
  ctx.remaining_goals = {{{"On", {"mug_1", "coffeemachine_1"}}, TruthValue::kTrue}};
  return ctx;
}

class FakeOracle final : public OracleView {
 public:
  std::map<std::string, Probe> probes;
  std::optional<int> now;
  std::vector<std::string> unlocated;
  Probe probe(const std::string& a) const override {
    auto it = probes.find(a);
    return it == probes.end() ? Probe{} : it->second;
  }
  std::optional<int> distance() const override { return now; }
  std::vector<std::string> unlocated_goal_objects() const override { return unlocated; }
};

}  // namespace

TEST_CASE("golden prompts") {
  for (const char* name : {"apple_blocked", "milk_start", "milk_midpoint"}) {
    CAPTURE(name);
    const Golden g = load_golden(name);
    const auto got = build_prompt(g.ctx);
    REQUIRE(got.size() == g.messages.size());
    for (size_t i = 0; i < got.size(); ++i) {
      CAPTURE(i);
      CHECK(got[i].role == g.messages[i].role);
      CHECK(got[i].content == g.messages[i].content);
    }
  }
}

TEST_CASE("prompt structure") {
  auto ctx = simple_ctx();
  const auto without = build_prompt(ctx);
  ctx.last_error = "grab mug_1 was blocked";
  const auto with = build_prompt(ctx);
  CHECK(with.size() == without.size() + 1);
  CHECK(with.front().role == "system");
  CHECK(with.back().content.find(
            "provide your selected action in the format '$$ <selected action> $$") !=
        std::string::npos);
  CHECK(with.back().content.find(kCorrectiveNote) != std::string::npos);
  ctx.candidates = {"a", "b"};
  CHECK(build_prompt(ctx)[4].content == "Select the best action from this list: ['$$ a $$', '$$ b $$']");
  CHECK(build_prompt(ctx) == build_prompt(ctx));
}

TEST_CASE("parse_selection") {
  CHECK(parse_selection("$$ open fridge_1 $$. Because the apple goes inside") == "open fridge_1");
  CHECK_FALSE(parse_selection("I suggest opening the fridge.").has_value());
  CHECK(parse_selection("$$ a $$ then $$ b $$") == "a");
  CHECK_FALSE(parse_selection("$$ unterminated").has_value());
  CHECK(parse_selection("I pick:\n$$\twalk_to_object fridge_1 \n$$") == "walk_to_object fridge_1");
}

TEST_CASE("llm_select picks a listed action") {
  auto mock = mock_of({"I choose $$ open fridge_1 $$ since it is closed."});
  const auto client = client_of(mock);
  const auto s = llm_select(simple_ctx(), client, "m", 3);
  CHECK(s.action == "open fridge_1");
  CHECK(s.retries_used == 0);
  CHECK(mock->calls() == 1);
}

TEST_CASE("hallucinate twice, then comply") {
  auto mock = mock_of({"$$ fly_to moon $$", "I would rather not say.", "$$ scanroom mug_1 kitchen $$"});
  const auto client = client_of(mock);
  const auto s = llm_select(simple_ctx(), client, "m", 3);
  CHECK(s.action == "scanroom mug_1 kitchen");
  CHECK(s.retries_used == 2);
  const auto reqs = mock->requests();
  REQUIRE(reqs.size() == 3);
  CHECK(reqs[0].find(kCorrectiveNote) == reqs[0].rfind(kCorrectiveNote));  // only in the format line
  for (int i : {1, 2}) {
    const auto msgs = json::parse(reqs[i]).at("messages");
    CHECK(msgs.back().at("role") == "user");
    CHECK(msgs.back().at("content") == kCorrectiveNote);
    CHECK(msgs.size() == json::parse(reqs[0]).at("messages").size() + 1);
  }
}

TEST_CASE("permanent hallucination exhausts the budget") {
  for (int r : {0, 2, 3}) {
    auto mock = mock_of({"$$ fly_to moon $$"});
    const auto client = client_of(mock);
    try {
      llm_select(simple_ctx(), client, "m", r);
      FAIL("expected SelectionExhausted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSelectionExhausted);
    }
    CHECK(mock->calls() == static_cast<size_t>(r + 1));
  }
  auto mock = mock_of({"x"});
  const auto client = client_of(mock);
  CHECK_THROWS_AS(llm_select(simple_ctx(), client, "m", -1), Error);
}

TEST_CASE("transport errors pass through") {
  auto mock = std::make_shared<llm::MockTransport>(std::vector<llm::HttpReply>{{401, "", std::nullopt}});
  const auto client = client_of(mock);
  CHECK_THROWS_AS(llm_select(simple_ctx(), client, "m", 3), llm::TransportError);
}

TEST_CASE("llm engine is afresh") {
  auto mock = mock_of({"$$ open fridge_1 $$"});
  LlmEngine engine(std::make_shared<llm::ChatClient>(client_of(mock)), "m");
  engine.select(simple_ctx(), 1);
  engine.select(simple_ctx(), 2);
  const auto reqs = mock->requests();
  REQUIRE(reqs.size() == 2);
  CHECK(reqs[0] == reqs[1]);
}

TEST_CASE("oracle policy") {
  OracleEngine oracle;
  SelectionContext single;
  single.candidates = {"place milk counter"};
  CHECK(oracle.select(single, 0).action == "place milk counter");

  auto ctx = simple_ctx();
  FakeOracle view;
  ctx.oracle = &view;
  view.now = 5;
  view.probes["open fridge_1"] = {true, false, 4};
  view.probes["walk_to_object fridge_1"] = {true, false, 3};
  CHECK(oracle.select(ctx, 0).action == "walk_to_object fridge_1");

  view.probes["walk_to_object fridge_1"] = {true, false, 6};
  view.probes["open fridge_1"] = {true, false, 5};
  view.unlocated = {"mug_1"};
  CHECK(oracle.select(ctx, 0).action == "scanroom mug_1 kitchen");

  view.unlocated.clear();
  view.probes["walk_to_object fridge_1"] = {false, true, std::nullopt};
  CHECK(oracle.select(ctx, 0).action == "walk_to_object fridge_1");

  view.probes.clear();
  CHECK(oracle.select(ctx, 0).action == "open fridge_1");
  SelectionContext empty;
  CHECK_THROWS_AS(oracle.select(empty, 0), Error);
}

TEST_CASE("random engine is seeded and stays in the list") {
  RandomEngine random;
  auto ctx = simple_ctx();
  CHECK(random.select(ctx, 7).action == random.select(ctx, 7).action);
  std::set<std::string> seen;
  for (uint64_t s = 0; s < 200; ++s) seen.insert(random.select(ctx, s).action);
  CHECK(seen.size() == ctx.candidates.size());
}

TEST_CASE("membership holds for every engine over random contexts") {
  std::mt19937_64 rng(11);
  OracleEngine oracle;
  RandomEngine random;
  for (int i = 0; i < 300; ++i) {
    SelectionContext ctx;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < n; ++k) ctx.candidates.push_back("act_" + std::to_string(rng() % 50));
    const auto pick = ctx.candidates[rng() % ctx.candidates.size()];
    auto mock = mock_of({"$$ nonsense $$", "$$ " + pick + " $$"});
    const auto client = client_of(mock);
    for (const auto& s : {oracle.select(ctx, i), random.select(ctx, i), llm_select(ctx, client, "m", 3)})
      CHECK(std::find(ctx.candidates.begin(), ctx.candidates.end(), s.action) != ctx.candidates.end());
  }
}

TEST_CASE("wrapping then parsing is the identity") {
  std::mt19937_64 rng(5);
  const std::string alphabet = "abcdefghij_ -|.+0123456789";
  for (int i = 0; i < 1000; ++i) {
    std::string a = "x";
    const int n = static_cast<int>(rng() % 30);
    for (int k = 0; k < n; ++k) a += alphabet[rng() % alphabet.size()];
    a += "y";
    CHECK(parse_selection("$$ " + a + " $$ because") == a);
  }
}
