/* C interface to the blocking-condition resolution library.
 *
 * Handles are opaque and owned by the caller; free each with its matching
 * bcr_*_free. Strings returned through `char**` are heap copies released
 * with bcr_string_free. Borrowed `const char*` results live as long as the
 * handle they came from. On failure a call returns a non-zero status and
 * bcr_last_error() describes it (per thread, until the next failing call).
 */
#ifndef BCR_BCR_H
#define BCR_BCR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define BCR_API __attribute__((visibility("default")))
#else
#define BCR_API
#endif

typedef enum bcr_status {
  BCR_OK = 0,
  BCR_E_MISSING_BINDING = 1,
  BCR_E_CATEGORY_MISMATCH = 2,
  BCR_E_SYNTAX = 3,
  BCR_E_VALIDATION = 4,
  BCR_E_UNKNOWN_PREDICATE = 5,
  BCR_E_UNKNOWN_INSTANCE = 6,
  BCR_E_UNKNOWN_SCHEMA = 7,
  BCR_E_ARITY_MISMATCH = 8,
  BCR_E_NO_ACHIEVER = 9,
  BCR_E_NOT_A_LEAF = 10,
  BCR_E_SELECTION_EXHAUSTED = 11,
  BCR_E_TRANSPORT = 12,
  BCR_E_UNKNOWN_TASK = 13,
  BCR_E_UNSOLVABLE = 14,
  BCR_E_CONFIG = 15,
  BCR_E_IO = 16,
  BCR_E_INVALID_ARGUMENT = 100,
  BCR_E_INTERNAL = 101
} bcr_status;

typedef struct bcr_domain bcr_domain;
typedef struct bcr_problem bcr_problem;
typedef struct bcr_trial bcr_trial;
typedef struct bcr_suite bcr_suite;

BCR_API const char* bcr_version(void);
BCR_API const char* bcr_status_name(bcr_status status);
/* Message of the last failing call on this thread; "" if none. */
BCR_API const char* bcr_last_error(void);
BCR_API void bcr_string_free(char* s);

BCR_API bcr_status bcr_domain_load(const char* path, bcr_domain** out);
BCR_API bcr_status bcr_domain_parse(const char* text, bcr_domain** out);
BCR_API void bcr_domain_free(bcr_domain* domain);
/* Canonical text of the parsed domain. */
BCR_API bcr_status bcr_domain_render(const bcr_domain* domain, char** out);

BCR_API bcr_status bcr_problem_load(const bcr_domain* domain, const char* path,
                                    bcr_problem** out);
BCR_API bcr_status bcr_problem_parse(const bcr_domain* domain, const char* text,
                                     bcr_problem** out);
BCR_API void bcr_problem_free(bcr_problem* problem);
BCR_API const char* bcr_problem_name(const bcr_problem* problem);

/* One trial. condition: oracle | random | ffreplan | ffreplan-limited
 * (the llm engine runs through bcr_suite_run). */
BCR_API bcr_status bcr_trial_run(const bcr_domain* domain, const bcr_problem* problem,
                                 const char* condition, uint64_t seed, int max_actions,
                                 bcr_trial** out);
BCR_API void bcr_trial_free(bcr_trial* trial);
/* "success", "budget_exhausted", "dead_end", "engine_exhausted",
 * "unsolvable" or "aborted". */
BCR_API const char* bcr_trial_result(const bcr_trial* trial);
BCR_API size_t bcr_trial_step_count(const bcr_trial* trial);
BCR_API bcr_status bcr_trial_jsonl(const bcr_trial* trial, char** out);

/* Suite configuration as a JSON object:
 *   {"domain": path, "tasks_dir": path, "tasks": [names or "all"],
 *    "conditions": [...], "trials": N, "seed": S, "max_actions": M,
 *    "parallel": K, "out": dir, "wall_clock": bool, "forest_snapshots": bool,
 *    "llm": {"endpoint", "model", "api_key", "retry_budget", "temperature"}}
 * Missing keys take their defaults. */
BCR_API bcr_status bcr_suite_run(const char* config_json, bcr_suite** out);
BCR_API void bcr_suite_free(bcr_suite* suite);
BCR_API size_t bcr_suite_trial_count(const bcr_suite* suite);
/* Trials whose result is "aborted". */
BCR_API size_t bcr_suite_aborted_count(const bcr_suite* suite);
BCR_API bcr_status bcr_suite_trial_jsonl(const bcr_suite* suite, size_t index, char** out);
BCR_API bcr_status bcr_suite_metrics_csv(const bcr_suite* suite, char** out);
BCR_API bcr_status bcr_suite_table(const bcr_suite* suite, char** out);

/* Re-renders prompts and forest snapshots from a JSONL trial log. */
BCR_API bcr_status bcr_replay(const char* log_text, char** out);

#ifdef __cplusplus
}
#endif

#endif /* BCR_BCR_H */
