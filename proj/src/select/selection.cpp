#include "select/selection.hpp"

#include <algorithm>
#include <random>

#include "core/error.hpp"

namespace bcr {

namespace {

void require_candidates(const SelectionContext& ctx) {
  if (ctx.candidates.empty())
    throw Error(ErrorCode::kValidation, "selection needs at least one candidate");
}

std::string py_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += "'" + items[i] + "'";
  }
  return out + "]";
}

std::vector<std::string> literal_strings(const std::vector<Literal>& ls) {
  std::vector<std::string> out;
  for (const auto& l : ls) out.push_back(l.to_string());
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string OracleEngine::tie_break(const std::vector<std::string>& candidates) {
  return *std::min_element(candidates.begin(), candidates.end());
}

Selection OracleEngine::select(const SelectionContext& ctx, uint64_t) const {
  require_candidates(ctx);
  if (!ctx.oracle) return {tie_break(ctx.candidates), std::nullopt, 0};

  const std::optional<int> now = ctx.oracle->distance();
  std::optional<std::string> best;
  int best_distance = 0;
  std::vector<std::string> blocked;
  for (const auto& c : ctx.candidates) {
    const OracleView::Probe p = ctx.oracle->probe(c);
    if (p.blocked) blocked.push_back(c);
    if (!p.success || !p.distance_after) continue;
    if (now && *p.distance_after >= *now) continue;
    if (!best || *p.distance_after < best_distance ||
        (*p.distance_after == best_distance && c < *best)) {
      best = c;
      best_distance = *p.distance_after;
    }
  }
  if (best) return {*best, "shortens the remaining plan", 0};

  std::vector<std::string> scans;
  for (const auto& o : ctx.oracle->unlocated_goal_objects())
    for (const auto& c : ctx.candidates)
      if (c.rfind("scanroom " + o + " ", 0) == 0) scans.push_back(c);
  if (!scans.empty()) return {tie_break(scans), "looks for a goal object", 0};
  if (!blocked.empty()) return {tie_break(blocked), "exposes a blocking condition", 0};
  return {tie_break(ctx.candidates), std::nullopt, 0};
}

Selection RandomEngine::select(const SelectionContext& ctx, uint64_t rng_seed) const {
  require_candidates(ctx);
  std::mt19937_64 rng(rng_seed);
  return {ctx.candidates[rng() % ctx.candidates.size()], std::nullopt, 0};
}

LlmEngine::LlmEngine(std::shared_ptr<llm::ChatClient> client, std::string model,
                     int retry_budget, double temperature)
    : client_(std::move(client)),
      model_(std::move(model)),
      retry_budget_(retry_budget),
      temperature_(temperature) {}

Selection LlmEngine::select(const SelectionContext& ctx, uint64_t) const {
  return llm_select(ctx, *client_, model_, retry_budget_, temperature_);
}

std::vector<llm::ChatMessage> build_prompt(const SelectionContext& ctx) {
  std::vector<std::string> wrapped;
  for (const auto& c : ctx.candidates) wrapped.push_back("$$ " + c + " $$");
  std::string situation = ctx.agent_summary;
  if (!situation.empty()) situation += " ";
  situation +=
      "Take your time and reason methodically about what each action would change "
      "before you choose.";

  std::vector<llm::ChatMessage> m;
  m.push_back({"system", kSystemPrompt});
  m.push_back({"user", situation});
  m.push_back({"user", "These are the actions I have taken so far: " + py_list(ctx.previous_actions)});
  m.push_back({"user", "These goals and subgoals are already completed: " +
                           py_list(literal_strings(ctx.completed_subgoals))});
  m.push_back({"user", "Select the best action from this list: " + py_list(wrapped)});
  m.push_back({"user", "that is most likely to help me achieve my remaining goals: " +
                           py_list(literal_strings(ctx.remaining_goals))});
  if (ctx.last_error) m.push_back({"user", "My last action failed: " + *ctx.last_error});
  m.push_back({"user",
               "Include an explanation for your action selection. Please refrain from getting "
               "stuck in action loops and provide your selected action in the format "
               "'$$ <selected action> $$'. " +
                   std::string(kCorrectiveNote)});
  return m;
}

std::optional<std::string> parse_selection(const std::string& text) {
  const auto open = text.find("$$");
  if (open == std::string::npos) return std::nullopt;
  const auto close = text.find("$$", open + 2);
  if (close == std::string::npos) return std::nullopt;
  return trim(text.substr(open + 2, close - open - 2));
}

Selection llm_select(const SelectionContext& ctx, const llm::ChatClient& client,
                     const std::string& model, int retry_budget, double temperature) {
  require_candidates(ctx);
  if (retry_budget < 0) throw Error(ErrorCode::kConfig, "retry budget must be >= 0");
  const auto prompt = build_prompt(ctx);
  for (int attempt = 0; attempt <= retry_budget; ++attempt) {
    llm::ChatRequest req{model, prompt, temperature, std::nullopt};
    if (attempt > 0) req.messages.push_back({"user", kCorrectiveNote});
    const llm::ChatResponse resp = client.chat(req);
    const auto choice = parse_selection(resp.text);
    if (choice && std::find(ctx.candidates.begin(), ctx.candidates.end(), *choice) !=
                      ctx.candidates.end())
      return {*choice, resp.text, attempt};
  }
  throw Error(ErrorCode::kSelectionExhausted,
              "no valid selection after " + std::to_string(retry_budget + 1) + " calls");
}

}  // namespace bcr
