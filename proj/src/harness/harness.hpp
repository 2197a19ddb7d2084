#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/domain.hpp"
#include "exec/record.hpp"
#include "llm/client.hpp"

namespace bcr::harness {

inline constexpr const char* kDefaultEndpoint = "https://api.openai.com/v1/chat/completions";
inline constexpr const char* kDefaultModel = "gpt-3.5-turbo";

struct LlmSettings {
  std::string endpoint = kDefaultEndpoint;
  std::string model = kDefaultModel;
  std::string api_key;
  int retry_budget = 3;
  double temperature = 0.0;
  /// Replaces the HTTP transport when set (tests, offline runs).
  std::shared_ptr<llm::Transport> transport;
};

/// oracle | random | llm | ffreplan | ffreplan-limited
const std::vector<std::string>& known_conditions();
const std::vector<std::string>& default_tasks();

struct SuiteConfig {
  std::string domain_path = "domains/kitchen.bcr";
  std::string tasks_dir;  // empty: <domain dir>/../tasks
  std::vector<std::string> tasks;
  std::vector<std::string> conditions;
  int trials = 50;
  uint64_t base_seed = 0;
  int max_actions = 100;
  int parallel = 0;  // 0: hardware threads capped at 8, 1 for llm
  std::string out_dir;  // empty: nothing written
  bool wall_clock = false;
  bool forest_snapshots = true;
  LlmSettings llm;
};

struct MetricsRow {
  std::string task;
  std::string condition;
  int trials = 0;
  int successes = 0;
  std::optional<double> mean_runtime_s;
  std::optional<double> sd_runtime_s;
  std::optional<double> mean_considered;
  std::optional<double> sd_considered;
  int loops_detected = 0;
};

/// One row per (task, condition) in first-seen order. sd uses n-1 and is
/// empty below two values.
std::vector<MetricsRow> aggregate(const std::vector<TrialRecord>& records);

std::string metrics_csv(const std::vector<MetricsRow>& rows);
std::string render_table(const std::vector<MetricsRow>& rows);

/// Log file name for one trial: "<task>__<condition>__seed<N>.jsonl".
std::string log_name(const TrialRecord& record);

/// Runs one trial of `condition`; errors inside the trial become an
/// aborted record rather than an exception.
TrialRecord run_condition(const std::string& condition, const Domain& domain,
                          const Problem& problem, uint64_t seed, const SuiteConfig& config);

struct SuiteResult {
  std::vector<TrialRecord> records;  // task-major, then condition, then seed
  std::vector<MetricsRow> rows;
};

/// Trial i of every (task, condition) gets seed base_seed + i. Writes
/// logs/, metrics.csv and table.txt under out_dir when it is set.
SuiteResult run_suite(const SuiteConfig& config);

std::vector<std::string> read_lines(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Prompts and forest snapshots re-rendered from a trial log.
std::string replay(const std::vector<std::string>& log_lines);

}  // namespace bcr::harness
