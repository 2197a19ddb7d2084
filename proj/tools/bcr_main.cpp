// bcr: run trial suites and replay logs through the C interface.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bcr/bcr.h"
#include "json.hpp"

namespace {

int report(bcr_status s) {
  std::cerr << "bcr: " << bcr_status_name(s) << ": " << bcr_last_error() << "\n";
  return s == BCR_E_CONFIG || s == BCR_E_INVALID_ARGUMENT ? 2 : 1;
}

std::string take(char* s) {
  std::string out = s ? s : "";
  bcr_string_free(s);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blocking-condition resolution: trial suites, baselines and log replay"};
  app.require_subcommand(1);

  std::string domain = "domains/kitchen.bcr", tasks_dir, task = "all", engine = "oracle",
              out = "out", endpoint = "https://api.openai.com/v1/chat/completions",
              model = "gpt-3.5-turbo";
  int trials = 50, max_actions = 100, parallel = 0, retry_budget = 3;
  uint64_t seed = 0;
  double temperature = 0.0;
  bool wall_clock = false, quiet = false;

  auto* run = app.add_subcommand("run", "run N seeded trials per task and engine");
  run->add_option("--domain", domain, "domain file")->capture_default_str();
  run->add_option("--tasks-dir", tasks_dir, "task directory (default: ../tasks next to the domain)");
  run->add_option("--task", task, "task name, path, comma list or 'all'")->capture_default_str();
  run->add_option("--engine", engine,
                  "oracle, random, llm, ffreplan or ffreplan-limited (comma list allowed)")
      ->capture_default_str();
  run->add_option("--trials", trials, "trials per task and engine")->capture_default_str()
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "seed of trial 0; trial i uses seed+i")->capture_default_str();
  run->add_option("--max-actions", max_actions, "action budget per trial")->capture_default_str()
      ->check(CLI::PositiveNumber);
  run->add_option("--parallel", parallel, "worker threads (0: auto)")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  run->add_option("--out", out, "output directory")->capture_default_str();
  run->add_option("--llm-endpoint", endpoint, "chat-completions URL")->capture_default_str();
  run->add_option("--llm-model", model, "model name")->capture_default_str();
  run->add_option("--retry-budget", retry_budget, "re-prompts after an invalid answer")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  run->add_option("--temperature", temperature, "sampling temperature")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  run->add_flag("--wall-clock", wall_clock, "record runtimes (logs stop being reproducible)");
  run->add_flag("-q,--quiet", quiet, "do not print the table");

  std::string log;
  auto* rep = app.add_subcommand("replay", "re-render prompts and forest snapshots from a log");
  rep->add_option("--log", log, "JSONL trial log")->required();

  CLI11_PARSE(app, argc, argv);

  if (*rep) {
    std::ifstream in(log);
    if (!in) {
      std::cerr << "bcr: cannot open " << log << "\n";
      return 1;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    char* text = nullptr;
    if (auto s = bcr_replay(ss.str().c_str(), &text)) return report(s);
    std::cout << take(text);
    return 0;
  }

  nlohmann::json cfg = {{"domain", domain},         {"tasks", split(task)},
                        {"conditions", split(engine)}, {"trials", trials},
                        {"seed", seed},             {"max_actions", max_actions},
                        {"parallel", parallel},     {"out", out},
                        {"wall_clock", wall_clock}};
  if (!tasks_dir.empty()) cfg["tasks_dir"] = tasks_dir;
  cfg["llm"] = {{"endpoint", endpoint}, {"model", model}, {"retry_budget", retry_budget},
                {"temperature", temperature}};
  if (const char* key = std::getenv("BCR_API_KEY")) cfg["llm"]["api_key"] = key;

  bcr_suite* suite = nullptr;
  if (auto s = bcr_suite_run(cfg.dump().c_str(), &suite)) return report(s);
  char* table = nullptr;
  if (auto s = bcr_suite_table(suite, &table)) {
    bcr_suite_free(suite);
    return report(s);
  }
  if (!quiet) std::cout << take(table);
  else bcr_string_free(table);
  const size_t aborted = bcr_suite_aborted_count(suite);
  const size_t total = bcr_suite_trial_count(suite);
  bcr_suite_free(suite);
  std::cerr << "bcr: " << total << " trials, logs and metrics.csv in " << out << "\n";
  if (aborted) {
    std::cerr << "bcr: " << aborted << " trial(s) aborted; see their logs\n";
    return 1;
  }
  return 0;
}
