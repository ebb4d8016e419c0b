/* C interface to the GOAL interpreter and verifier. */
#ifndef GOAL_GOAL_H
#define GOAL_GOAL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define GOAL_API __declspec(dllexport)
#else
#define GOAL_API __attribute__((visibility("default")))
#endif

typedef enum goal_status {
  GOAL_OK = 0,
  GOAL_PROPERTY_FAILED = 1, /* output is still produced */
  GOAL_PARSE_ERROR = 2,     /* syntax errors and rejected input */
  GOAL_BUDGET_EXCEEDED = 3, /* state budget or oracle bounds */
  GOAL_INVALID_ARGUMENT = 4,
  GOAL_INTERNAL_ERROR = 5
} goal_status;

typedef enum goal_scheduler {
  GOAL_SCHED_ROUND_ROBIN = 0,
  GOAL_SCHED_FAIR_RANDOM = 1,
  GOAL_SCHED_UNFAIR = 2 /* demonstration only; never used by verification */
} goal_scheduler;

typedef enum goal_format { GOAL_FORMAT_TEXT = 0, GOAL_FORMAT_RECORDS = 1 } goal_format;

typedef enum goal_triple_mode { GOAL_TRIPLE_SEMANTIC = 0, GOAL_TRIPLE_WLP = 1 } goal_triple_mode;

typedef struct goal_options {
  goal_scheduler scheduler;
  uint64_t seed;
  uint64_t steps;
  uint32_t jobs;
  uint64_t budget;
  goal_format format;
} goal_options;

typedef struct goal_agent goal_agent;

/* Defaults: round-robin, seed 0, 64 steps, 1 job, budget from GOAL_BUDGET or 10000, text. */
GOAL_API void goal_options_init(goal_options* options);

GOAL_API goal_status goal_agent_from_file(const char* path, goal_agent** out);
GOAL_API goal_status goal_agent_from_string(const char* text, goal_agent** out);
/* Embedded examples: "shopping", "shopping_literal", "broken". */
GOAL_API goal_status goal_agent_from_fixture(const char* name, goal_agent** out);
GOAL_API void goal_agent_free(goal_agent* agent);

/* Strings returned through char** are owned by the caller; release them with goal_free_string. */
GOAL_API goal_status goal_agent_describe(const goal_agent* agent, char** out);
GOAL_API goal_status goal_run(const goal_agent* agent, const goal_options* options, char** trace);
/* properties: names of declared properties or property declarations; count 0 checks everything. */
GOAL_API goal_status goal_verify(const goal_agent* agent, const goal_options* options, const char* const* properties,
                                 size_t count, char** report);
GOAL_API goal_status goal_graph(const goal_agent* agent, const goal_options* options, char** dot);
GOAL_API goal_status goal_check_triple(const goal_agent* agent, const goal_options* options, const char* triple,
                                       goal_triple_mode mode, char** report);

/* Message of the last failure on this thread; empty after success. */
GOAL_API const char* goal_last_error(void);
GOAL_API void goal_free_string(char* s);
GOAL_API const char* goal_version(void);

#ifdef __cplusplus
}
#endif

#endif /* GOAL_GOAL_H */
