/* mros: metacontrol runtime for self-adaptive navigation.
 *
 * Plain C interface over the C++ core. Objects are opaque handles created
 * and destroyed through this API. Every fallible call returns an
 * mros_status; on failure the calling thread's last error holds a message
 * and, for parse errors, a 1-based line and column.
 */
#ifndef MROS_MROS_H
#define MROS_MROS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MROS_BUILDING)
#    define MROS_API __declspec(dllexport)
#  else
#    define MROS_API __declspec(dllimport)
#  endif
#else
#  define MROS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mros_status {
  MROS_OK = 0,
  MROS_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad value, fewer than two seeds */
  MROS_ERR_IO = 2,               /* file could not be read or written */
  MROS_ERR_PARSE = 3,            /* syntax error; see mros_last_error_line/column */
  MROS_ERR_SEMANTIC = 4,         /* duplicate id, unknown reference, bad comparator */
  MROS_ERR_CONFIG = 5,           /* configuration does not match the model or system */
  MROS_ERR_UNKNOWN_MODE = 6,
  MROS_ERR_UNKNOWN_FD = 7,
  MROS_ERR_UNKNOWN_COMPONENT = 8,
  MROS_ERR_INTERNAL = 9
} mros_status;

typedef enum mros_mission_status {
  MROS_MISSION_RUNNING = 0,
  MROS_MISSION_SUCCESS = 1,
  MROS_MISSION_COLLISION = 2,
  MROS_MISSION_BATTERY_DEPLETED = 3,
  MROS_MISSION_TIMEOUT = 4
} mros_mission_status;

/* Message of the last failed call on this thread; "" if none. Valid until
 * the next API call on the same thread. */
MROS_API const char* mros_last_error(void);
/* Position of the last parse or semantic error, 0 when not applicable. */
MROS_API int mros_last_error_line(void);
MROS_API int mros_last_error_column(void);

MROS_API const char* mros_version(void);
MROS_API const char* mros_status_name(mros_status status);

/* Normalized QA measurements, clamped to [0, 1]. */
MROS_API double mros_energy_attr(double power_load);
MROS_API double mros_safety_attr(double min_obstacle_distance);

/* A knowledge model together with its metacontrol configuration. */
typedef struct mros_model mros_model;

MROS_API mros_status mros_model_load_files(const char* model_path, const char* config_path, mros_model** out);
MROS_API mros_status mros_model_load_text(const char* model_text, const char* config_text, mros_model** out);
MROS_API void mros_model_destroy(mros_model* model);
MROS_API size_t mros_model_design_count(const mros_model* model);
/* Design id by declaration order, or NULL when out of range. Owned by the model. */
MROS_API const char* mros_model_design_id(const mros_model* model, size_t index);

typedef struct mros_scenario {
  double start_x, start_y;
  double goal_x, goal_y;
  double duration_limit_s;
  double obstacle_rate; /* arrivals per second */
  uint64_t seed;
  double dt;
  double initial_battery;
  double staleness_s;
  const char* initial_fd;      /* adaptive mode start design, NULL for reasoner choice */
  const char* fault_component; /* NULL for no injected fault */
  double fault_at;
} mros_scenario;

/* Fills the default scenario. */
MROS_API void mros_scenario_init(mros_scenario* scenario);

typedef struct mros_metrics {
  uint64_t seed;
  double safety_violation_frac;
  double energy_violation_frac;
  int success;
  mros_mission_status status;
  int adaptations;
  int no_feasible_events;
  double mission_time_s;
} mros_metrics;

/* mode is "adaptive" or "static:<fd_id>". out_dir may be NULL; otherwise
 * trace.csv, diagnostics.csv, decisions.log, reconfigurations.log and
 * metrics.csv are written there. */
MROS_API mros_status mros_run_mission(const mros_model* model, const char* mode, const mros_scenario* scenario,
                                      const char* out_dir, mros_metrics* out);

typedef struct mros_mode_summary {
  double safety_violation_frac;
  double energy_violation_frac;
  double success_rate;
  double adaptations;
  double no_feasible_events;
} mros_mode_summary;

typedef struct mros_comparison {
  mros_mode_summary adaptive;
  mros_mode_summary fixed;
} mros_comparison;

/* Paired adaptive/static runs, scenario seed replaced by each of `seeds`.
 * Needs seed_count >= 2. Writes compare.csv into out_dir when given.
 * `verdict` (may be NULL) receives a NUL-terminated per-metric summary,
 * truncated to verdict_size. jobs = 0 uses all hardware threads. */
MROS_API mros_status mros_compare(const mros_model* model, const uint64_t* seeds, size_t seed_count,
                                  const char* static_fd, const mros_scenario* scenario, unsigned jobs,
                                  const char* out_dir, mros_comparison* out, char* verdict, size_t verdict_size);

/* Reads one seed per line. On success *seeds is allocated with malloc and
 * must be released with mros_free. */
MROS_API mros_status mros_read_seed_list(const char* path, uint64_t** seeds, size_t* count);
MROS_API void mros_free(void* p);

/* Writes case_study.model and case_study.config into out_dir. */
MROS_API mros_status mros_write_case_study(const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* MROS_MROS_H */
