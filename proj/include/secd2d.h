#ifndef SECD2D_H
#define SECD2D_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SECD2D_BUILDING)
#    define SECD2D_API __declspec(dllexport)
#  else
#    define SECD2D_API __declspec(dllimport)
#  endif
#else
#  define SECD2D_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum secd2d_status {
    SECD2D_OK = 0,
    SECD2D_ERR_INVALID_ARGUMENT = 1,
    SECD2D_ERR_CONFIG = 2,
    SECD2D_ERR_DOMAIN = 3,
    SECD2D_ERR_NUMERICAL = 4,
    SECD2D_ERR_INFEASIBLE = 5,
    SECD2D_ERR_NONCONVERGENCE = 6,
    SECD2D_ERR_SEARCH_SPACE = 7,
    SECD2D_ERR_IO = 8,
    SECD2D_ERR_INTERNAL = 9
} secd2d_status;

typedef enum secd2d_experiment {
    SECD2D_EXP_CONVERGENCE = 0,
    SECD2D_EXP_QOS_SWEEP = 1,
    SECD2D_EXP_POWER_SWEEP = 2,
    SECD2D_EXP_LUE_SWEEP = 3,
    SECD2D_EXP_COMPARE = 4
} secd2d_experiment;

typedef struct secd2d_settings secd2d_settings;
typedef struct secd2d_table secd2d_table;

typedef struct secd2d_run_options {
    int snapshots;
    uint64_t seed;
    /* Comma-separated scheme names; NULL or "" selects the experiment default. */
    const char* schemes;
    /* Worker threads; 0 uses the hardware concurrency. */
    int threads;
    /* Nonzero records wall_ms; zero writes 0 so output bytes are reproducible. */
    int wall_time;
    /* Nonzero collects per-iteration solver rows for the proposed scheme. */
    int trace;
} secd2d_run_options;

typedef struct secd2d_snapshot {
    double total_secrecy_bps;
    double mean_secrecy_per_lue_bps;
    double feasible_fraction;
    double outer_iters;
    int converged;
} secd2d_snapshot;

/* Message of the last failed call on this thread; empty when none. */
SECD2D_API const char* secd2d_last_error(void);
SECD2D_API const char* secd2d_version(void);

/* preset: "paper" (default when NULL) or "desk". */
SECD2D_API secd2d_status secd2d_settings_create(const char* preset, secd2d_settings** out);
SECD2D_API void secd2d_settings_destroy(secd2d_settings* s);
SECD2D_API secd2d_status secd2d_settings_load(secd2d_settings* s, const char* path);
SECD2D_API secd2d_status secd2d_settings_set(secd2d_settings* s, const char* key, const char* value);
/* Writes the full key=value dump into buf (truncated to cap); *needed receives the full length + 1. */
SECD2D_API secd2d_status secd2d_settings_dump(const secd2d_settings* s, char* buf, size_t cap, size_t* needed);

SECD2D_API secd2d_status secd2d_run_snapshot(const secd2d_settings* s, uint64_t seed, const char* scheme,
                                             secd2d_snapshot* out);

SECD2D_API secd2d_status secd2d_run_experiment(const secd2d_settings* s, secd2d_experiment kind,
                                               const secd2d_run_options* opt, secd2d_table** out);
SECD2D_API size_t secd2d_table_rows(const secd2d_table* t);
/* path NULL or "-" writes to standard output. */
SECD2D_API secd2d_status secd2d_table_write_csv(const secd2d_table* t, const char* path);
SECD2D_API secd2d_status secd2d_table_write_trace(const secd2d_table* t, const char* path);
SECD2D_API void secd2d_table_destroy(secd2d_table* t);

#ifdef __cplusplus
}
#endif

#endif
