#include "harness/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "core/error.hpp"
#include "exec/executor.hpp"
#include "parser/domain_parser.hpp"
#include "replan/replan.hpp"
#include "select/selection.hpp"

namespace bcr::harness {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string number(const std::optional<double>& v) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

std::pair<std::optional<double>, std::optional<double>> mean_sd(const std::vector<double>& xs) {
  if (xs.empty()) return {};
  double sum = 0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, std::nullopt};
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

std::vector<std::string> expand_tasks(const std::vector<std::string>& tasks) {
  std::vector<std::string> out;
  for (const auto& t : tasks) {
    if (t == "all")
      out.insert(out.end(), default_tasks().begin(), default_tasks().end());
    else
      out.push_back(t);
  }
  return out;
}

std::string task_path(const SuiteConfig& config, const std::string& task) {
  if (task.size() > 4 && task.ends_with(".bcr")) return task;
  const fs::path dir = config.tasks_dir.empty()
                           ? fs::path(config.domain_path).parent_path() / ".." / "tasks"
                           : fs::path(config.tasks_dir);
  return (dir / (task + ".bcr")).string();
}

std::string task_label(const std::string& task) {
  return task.ends_with(".bcr") ? fs::path(task).stem().string() : task;
}

void render_forest(std::ostringstream& out, const json& node, int depth) {
  out << std::string(static_cast<size_t>(2 + 2 * depth), ' ') << node.at("action").get<std::string>()
      << " [" << node.at("status").get<std::string>();
  if (node.contains("condition") && !node["condition"].is_null())
    out << ": " << node["condition"].get<std::string>();
  out << "]\n";
  for (const auto& c : node.at("children")) render_forest(out, c, depth + 1);
}

}  // namespace

const std::vector<std::string>& known_conditions() {
  static const std::vector<std::string> c{"oracle", "random", "llm", "ffreplan",
                                          "ffreplan-limited"};
  return c;
}

const std::vector<std::string>& default_tasks() {
  static const std::vector<std::string> t{"coffee", "apple", "mug", "toast"};
  return t;
}

std::vector<MetricsRow> aggregate(const std::vector<TrialRecord>& records) {
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<const TrialRecord*>> groups;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.task, r.condition);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::vector<MetricsRow> rows;
  for (const auto& key : order) {
    MetricsRow row{key.first, key.second};
    std::vector<double> runtimes, considered;
    for (const TrialRecord* r : groups[key]) {
      ++row.trials;
      row.successes += r->result == TrialResult::kSuccess;
      row.loops_detected += r->loop_detected;
      if (r->runtime_s) runtimes.push_back(*r->runtime_s);
      if (auto c = r->mean_considered()) considered.push_back(*c);
    }
    std::tie(row.mean_runtime_s, row.sd_runtime_s) = mean_sd(runtimes);
    std::tie(row.mean_considered, row.sd_considered) = mean_sd(considered);
    rows.push_back(row);
  }
  return rows;
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out =
      "task,condition,trials,successes,mean_runtime_s,sd_runtime_s,mean_considered,"
      "sd_considered,loops_detected\n";
  for (const auto& r : rows)
    out += r.task + "," + r.condition + "," + std::to_string(r.trials) + "," +
           std::to_string(r.successes) + "," + number(r.mean_runtime_s) + "," +
           number(r.sd_runtime_s) + "," + number(r.mean_considered) + "," +
           number(r.sd_considered) + "," + std::to_string(r.loops_detected) + "\n";
  return out;
}

std::string render_table(const std::vector<MetricsRow>& rows) {
  auto pm = [](const std::optional<double>& m, const std::optional<double>& sd) {
    if (!m) return std::string("-");
    char buf[64];
    if (sd)
      std::snprintf(buf, sizeof buf, "%.2f +- %.2f", *m, *sd);
    else
      std::snprintf(buf, sizeof buf, "%.2f", *m);
    return std::string(buf);
  };
  std::vector<std::vector<std::string>> cells{
      {"task", "condition", "success", "runtime (s)", "considered", "loops"}};
  for (const auto& r : rows)
    cells.push_back({r.task, r.condition,
                     std::to_string(r.successes) + "/" + std::to_string(r.trials),
                     pm(r.mean_runtime_s, r.sd_runtime_s), pm(r.mean_considered, r.sd_considered),
                     std::to_string(r.loops_detected)});
  std::vector<size_t> width(cells[0].size(), 0);
  for (const auto& row : cells)
    for (size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::string out;
  for (size_t k = 0; k < cells.size(); ++k) {
    for (size_t i = 0; i < cells[k].size(); ++i) {
      out += cells[k][i];
      if (i + 1 < cells[k].size()) out += std::string(width[i] - cells[k][i].size() + 2, ' ');
    }
    out += "\n";
    if (k == 0) {
      size_t total = 0;
      for (size_t w : width) total += w + 2;
      out += std::string(total - 2, '-') + "\n";
    }
  }
  return out;
}

std::string log_name(const TrialRecord& record) {
  return record.task + "__" + record.condition + "__seed" + std::to_string(record.seed) + ".jsonl";
}

TrialRecord run_condition(const std::string& condition, const Domain& domain,
                          const Problem& problem, uint64_t seed, const SuiteConfig& config) {
  const std::string task = problem.name;
  try {
    if (condition == "ffreplan" || condition == "ffreplan-limited") {
      auto world = sim::make_world(domain, problem, seed);
      const auto start = std::chrono::steady_clock::now();
      auto rec = replan::replan_execute(
          *world, domain, problem,
          condition == "ffreplan" ? replan::Observability::kFull : replan::Observability::kLimited,
          config.max_actions);
      rec.task = task;
      rec.seed = seed;
      if (config.wall_clock)
        rec.runtime_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return rec;
    }
    TrialConfig tc{task, seed, config.max_actions, config.wall_clock, config.forest_snapshots};
    if (condition == "oracle") return run_trial(tc, domain, problem, OracleEngine{});
    if (condition == "random") return run_trial(tc, domain, problem, RandomEngine{});
    if (condition == "llm") {
      auto transport = config.llm.transport;
      if (!transport) {
        if (config.llm.api_key.empty())
          throw Error(ErrorCode::kConfig, "the llm engine needs BCR_API_KEY");
        transport = std::make_shared<llm::HttpTransport>(config.llm.endpoint, config.llm.api_key);
      }
      llm::ClientConfig cc;
      cc.seed = seed;
      cc.secret = config.llm.api_key;
      auto client = std::make_shared<llm::ChatClient>(transport, cc);
      const LlmEngine engine(client, config.llm.model, config.llm.retry_budget,
                             config.llm.temperature);
      return run_trial(tc, domain, problem, engine);
    }
    throw Error(ErrorCode::kConfig, "unknown condition " + condition);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    TrialRecord rec;
    rec.task = task;
    rec.condition = condition;
    rec.seed = seed;
    rec.max_actions = config.max_actions;
    rec.result = TrialResult::kAborted;
    rec.failure = std::string(to_string(e.code())) + ": " + e.what();
    return rec;
  }
}

SuiteResult run_suite(const SuiteConfig& config) {
  if (config.trials < 1) throw Error(ErrorCode::kConfig, "trials must be >= 1");
  if (config.max_actions < 1) throw Error(ErrorCode::kConfig, "max_actions must be >= 1");
  if (config.conditions.empty()) throw Error(ErrorCode::kConfig, "no conditions given");
  for (const auto& c : config.conditions)
    if (std::find(known_conditions().begin(), known_conditions().end(), c) ==
        known_conditions().end())
      throw Error(ErrorCode::kConfig, "unknown engine " + c);
  const auto tasks = expand_tasks(config.tasks.empty() ? default_tasks() : config.tasks);
  if (std::count(config.conditions.begin(), config.conditions.end(), "llm") &&
      !config.llm.transport && config.llm.api_key.empty())
    throw Error(ErrorCode::kConfig, "the llm engine needs BCR_API_KEY");

  const Domain domain = parser::load_domain(config.domain_path);
  std::vector<Problem> problems;
  for (const auto& t : tasks) {
    Problem p = parser::load_problem(task_path(config, t), domain);
    p.name = task_label(t);
    problems.push_back(std::move(p));
  }

  struct Job {
    size_t problem;
    std::string condition;
    uint64_t seed;
  };
  std::vector<Job> jobs;
  for (size_t p = 0; p < problems.size(); ++p)
    for (const auto& c : config.conditions)
      for (int i = 0; i < config.trials; ++i)
        jobs.push_back({p, c, config.base_seed + static_cast<uint64_t>(i)});

  int k = config.parallel;
  if (k <= 0) {
    const bool llm = std::count(config.conditions.begin(), config.conditions.end(), "llm") > 0;
    k = llm ? 1 : std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, 8);
  }
  k = std::min<int>(k, static_cast<int>(jobs.size()));

  SuiteResult result;
  result.records.resize(jobs.size());
  std::atomic<size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mu;
  auto worker = [&] {
    for (size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      try {
        result.records[j] =
            run_condition(jobs[j].condition, domain, problems[jobs[j].problem], jobs[j].seed, config);
      } catch (...) {
        std::lock_guard lock(fatal_mu);
        if (!fatal) fatal = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (fatal) std::rethrow_exception(fatal);

  result.rows = aggregate(result.records);
  if (!config.out_dir.empty()) {
    const fs::path out(config.out_dir);
    std::error_code ec;
    fs::create_directories(out / "logs", ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + (out / "logs").string());
    for (const auto& r : result.records) {
      std::string text;
      for (const auto& line : to_jsonl(r)) text += line + "\n";
      write_file((out / "logs" / log_name(r)).string(), text);
    }
    write_file((out / "metrics.csv").string(), metrics_csv(result.rows));
    write_file((out / "table.txt").string(), render_table(result.rows));
  }
  return result;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(line);
  return lines;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
}

std::string replay(const std::vector<std::string>& log_lines) {
  const TrialRecord rec = from_jsonl(log_lines);
  std::ostringstream out;
  out << "trial " << rec.task << " / " << rec.condition << " / seed " << rec.seed << ": "
      << to_string(rec.result) << " after " << rec.steps.size() << " actions\n";
  size_t e = 0;
  auto episodes_upto = [&](int step) {
    for (; e < rec.episodes.size() && rec.episodes[e].before_step <= step; ++e) {
      const auto& ep = rec.episodes[e];
      out << "== plan (" << ep.trigger << "): " << (ep.solved ? "solved" : "unsolved") << ", "
          << ep.nodes_expanded << " nodes, length " << ep.plan_length << "\n";
    }
  };
  for (const auto& s : rec.steps) {
    episodes_upto(s.index);
    out << "-- step " << s.index << ": " << s.action << " -> " << sim::to_string(s.outcome);
    if (s.condition) out << " (" << *s.condition << ")";
    if (!s.error.empty()) out << " (" << s.error << ")";
    if (s.fallback) out << " [fallback]";
    out << "\n";
    if (s.forest) {
      out << "forest:\n";
      for (const auto& root : s.forest->at("roots")) render_forest(out, root, 0);
    }
    if (s.context) {
      SelectionContext ctx;
      ctx.candidates = s.candidates;
      ctx.previous_actions = s.context->previous_actions;
      ctx.completed_subgoals = s.context->completed_subgoals;
      ctx.remaining_goals = s.context->remaining_goals;
      ctx.last_error = s.context->last_error;
      ctx.agent_summary = s.context->agent_summary;
      out << "prompt:\n";
      for (const auto& m : build_prompt(ctx)) out << "  [" << m.role << "] " << m.content << "\n";
    }
  }
  episodes_upto(1 << 30);
  if (rec.failure) out << "aborted: " << *rec.failure << "\n";
  return out.str();
}

}  // namespace bcr::harness
