#include "bcr/bcr.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "core/error.hpp"
#include "harness/harness.hpp"
#include "json.hpp"
#include "parser/domain_parser.hpp"

struct bcr_domain {
  bcr::Domain value;
};
struct bcr_problem {
  bcr::Problem value;
};
struct bcr_trial {
  bcr::TrialRecord value;
};
struct bcr_suite {
  bcr::harness::SuiteResult value;
};

namespace {

thread_local std::string last_error;

bcr_status fail(bcr_status s, const std::string& message) {
  last_error = message;
  return s;
}

// Runs `f`, turning exceptions into a status and the thread's last error.
template <typename F>
bcr_status guard(F&& f) {
  try {
    f();
    return BCR_OK;
  } catch (const bcr::Error& e) {
    return fail(static_cast<bcr_status>(static_cast<int>(e.code()) + 1), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(BCR_E_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(BCR_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BCR_E_INTERNAL, e.what());
  }
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

std::string jsonl_text(const bcr::TrialRecord& r) {
  std::string out;
  for (const auto& line : bcr::to_jsonl(r)) out += line + "\n";
  return out;
}

bcr::harness::SuiteConfig suite_config(const nlohmann::json& j) {
  if (!j.is_object()) throw bcr::Error(bcr::ErrorCode::kConfig, "suite config must be an object");
  bcr::harness::SuiteConfig c;
  c.domain_path = j.value("domain", c.domain_path);
  c.tasks_dir = j.value("tasks_dir", c.tasks_dir);
  c.tasks = j.value("tasks", std::vector<std::string>{"all"});
  c.conditions = j.value("conditions", std::vector<std::string>{"oracle"});
  c.trials = j.value("trials", c.trials);
  c.base_seed = j.value("seed", c.base_seed);
  c.max_actions = j.value("max_actions", c.max_actions);
  c.parallel = j.value("parallel", c.parallel);
  c.out_dir = j.value("out", c.out_dir);
  c.wall_clock = j.value("wall_clock", c.wall_clock);
  c.forest_snapshots = j.value("forest_snapshots", c.forest_snapshots);
  if (j.contains("llm")) {
    const auto& l = j["llm"];
    c.llm.endpoint = l.value("endpoint", c.llm.endpoint);
    c.llm.model = l.value("model", c.llm.model);
    c.llm.api_key = l.value("api_key", c.llm.api_key);
    c.llm.retry_budget = l.value("retry_budget", c.llm.retry_budget);
    c.llm.temperature = l.value("temperature", c.llm.temperature);
    if (c.llm.retry_budget < 0) throw bcr::Error(bcr::ErrorCode::kConfig, "retry_budget must be >= 0");
    if (c.llm.temperature < 0) throw bcr::Error(bcr::ErrorCode::kConfig, "temperature must be >= 0");
  }
  return c;
}

}  // namespace

#define BCR_REQUIRE(cond)                                              \
  do {                                                                 \
    if (!(cond)) return fail(BCR_E_INVALID_ARGUMENT, "null argument: " #cond); \
  } while (0)

extern "C" {

const char* bcr_version(void) { return "0.1.0"; }

const char* bcr_status_name(bcr_status status) {
  switch (status) {
    case BCR_OK: return "Ok";
    case BCR_E_INVALID_ARGUMENT: return "InvalidArgument";
    case BCR_E_INTERNAL: return "Internal";
    default: break;
  }
  const int code = static_cast<int>(status) - 1;
  if (code >= 0 && code <= static_cast<int>(bcr::ErrorCode::kIo))
    return bcr::to_string(static_cast<bcr::ErrorCode>(code));
  return "Unknown";
}

const char* bcr_last_error(void) { return last_error.c_str(); }

void bcr_string_free(char* s) { std::free(s); }

bcr_status bcr_domain_load(const char* path, bcr_domain** out) {
  BCR_REQUIRE(path && out);
  return guard([&] { *out = new bcr_domain{bcr::parser::load_domain(path)}; });
}

bcr_status bcr_domain_parse(const char* text, bcr_domain** out) {
  BCR_REQUIRE(text && out);
  return guard([&] { *out = new bcr_domain{bcr::parser::parse_domain(text)}; });
}

void bcr_domain_free(bcr_domain* domain) { delete domain; }

bcr_status bcr_domain_render(const bcr_domain* domain, char** out) {
  BCR_REQUIRE(domain && out);
  return guard([&] { *out = copy_out(bcr::parser::render_domain(domain->value)); });
}

bcr_status bcr_problem_load(const bcr_domain* domain, const char* path, bcr_problem** out) {
  BCR_REQUIRE(domain && path && out);
  return guard([&] { *out = new bcr_problem{bcr::parser::load_problem(path, domain->value)}; });
}

bcr_status bcr_problem_parse(const bcr_domain* domain, const char* text, bcr_problem** out) {
  BCR_REQUIRE(domain && text && out);
  return guard([&] { *out = new bcr_problem{bcr::parser::parse_problem(text, domain->value)}; });
}

void bcr_problem_free(bcr_problem* problem) { delete problem; }

const char* bcr_problem_name(const bcr_problem* problem) {
  return problem ? problem->value.name.c_str() : "";
}

bcr_status bcr_trial_run(const bcr_domain* domain, const bcr_problem* problem,
                         const char* condition, uint64_t seed, int max_actions, bcr_trial** out) {
  BCR_REQUIRE(domain && problem && condition && out);
  return guard([&] {
    const std::string cond = condition;
    if (cond == "llm")
      throw bcr::Error(bcr::ErrorCode::kConfig, "run the llm engine through bcr_suite_run");
    if (max_actions < 1) throw bcr::Error(bcr::ErrorCode::kConfig, "max_actions must be >= 1");
    bcr::harness::SuiteConfig cfg;
    cfg.max_actions = max_actions;
    *out = new bcr_trial{
        bcr::harness::run_condition(cond, domain->value, problem->value, seed, cfg)};
  });
}

void bcr_trial_free(bcr_trial* trial) { delete trial; }

const char* bcr_trial_result(const bcr_trial* trial) {
  return trial ? bcr::to_string(trial->value.result) : "";
}

size_t bcr_trial_step_count(const bcr_trial* trial) {
  return trial ? trial->value.steps.size() : 0;
}

bcr_status bcr_trial_jsonl(const bcr_trial* trial, char** out) {
  BCR_REQUIRE(trial && out);
  return guard([&] { *out = copy_out(jsonl_text(trial->value)); });
}

bcr_status bcr_suite_run(const char* config_json, bcr_suite** out) {
  BCR_REQUIRE(config_json && out);
  return guard([&] {
    const auto cfg = suite_config(nlohmann::json::parse(config_json));
    *out = new bcr_suite{bcr::harness::run_suite(cfg)};
  });
}

void bcr_suite_free(bcr_suite* suite) { delete suite; }

size_t bcr_suite_trial_count(const bcr_suite* suite) {
  return suite ? suite->value.records.size() : 0;
}

size_t bcr_suite_aborted_count(const bcr_suite* suite) {
  if (!suite) return 0;
  size_t n = 0;
  for (const auto& r : suite->value.records) n += r.result == bcr::TrialResult::kAborted;
  return n;
}

bcr_status bcr_suite_trial_jsonl(const bcr_suite* suite, size_t index, char** out) {
  BCR_REQUIRE(suite && out);
  if (index >= suite->value.records.size())
    return fail(BCR_E_INVALID_ARGUMENT, "trial index out of range");
  return guard([&] { *out = copy_out(jsonl_text(suite->value.records[index])); });
}

bcr_status bcr_suite_metrics_csv(const bcr_suite* suite, char** out) {
  BCR_REQUIRE(suite && out);
  return guard([&] { *out = copy_out(bcr::harness::metrics_csv(suite->value.rows)); });
}

bcr_status bcr_suite_table(const bcr_suite* suite, char** out) {
  BCR_REQUIRE(suite && out);
  return guard([&] { *out = copy_out(bcr::harness::render_table(suite->value.rows)); });
}

bcr_status bcr_replay(const char* log_text, char** out) {
  BCR_REQUIRE(log_text && out);
  return guard([&] {
    std::vector<std::string> lines;
    std::istringstream in(log_text);
    for (std::string line; std::getline(in, line);)
      if (!line.empty()) lines.push_back(line);
    *out = copy_out(bcr::harness::replay(lines));
  });
}

}  // extern "C"
