/*
 * myopia: myopic versus exact multi-trial lookahead for Bayesian adaptive
 * parameter estimation.
 *
 * Plain C interface over the C++ engine. Objects are opaque handles owned by
 * the caller and released with the matching *_free function. Every fallible
 * call returns a myopia_status; on failure myopia_last_error() describes the
 * problem (thread-local, valid until the next failing call on that thread).
 */
#ifndef MYOPIA_MYOPIA_H
#define MYOPIA_MYOPIA_H

#include <stddef.h>
#include <stdint.h>

#if defined(MYOPIA_BUILDING_LIBRARY)
#define MYOPIA_API __attribute__((visibility("default")))
#else
#define MYOPIA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum myopia_status {
    MYOPIA_OK = 0,
    MYOPIA_ERR_USAGE = 1,   /* bad argument or violated precondition */
    MYOPIA_ERR_CONFIG = 2,  /* invalid configuration */
    MYOPIA_ERR_RUNTIME = 3  /* model domain, impossible observation, resource limit, I/O */
} myopia_status;

typedef enum myopia_strategy {
    MYOPIA_STRATEGY_MYOPIC = 0,
    MYOPIA_STRATEGY_GLOBAL = 1, /* execute a solved T-trial policy, re-solve every T trials */
    MYOPIA_STRATEGY_AHEAD = 2   /* re-solve every trial, execute the first design */
} myopia_strategy;

typedef struct myopia_config myopia_config;
typedef struct myopia_metrics myopia_metrics;

/* One per-trial row of a campaign. Diagnostic fields are NaN when has_diagnostics is 0. */
typedef struct myopia_trial_row {
    int trial;
    double mse_p1;
    double mse_p2;
    double info_gain;
    double ud_mean;
    double rd_mean;
    double width_immediate;
    double width_next;
    int has_diagnostics;
} myopia_trial_row;

typedef struct myopia_oracle_report {
    size_t instances;
    double max_deviation;       /* max |bellman - brute force| */
    double worst_monotonicity;  /* most negative V(T+1) - V(T) */
    double worst_dominance;     /* most negative V(2) - greedy two-step value */
    double worst_decomposition; /* max |decomposition optimum - V(2)| */
} myopia_oracle_report;

MYOPIA_API const char* myopia_version(void);
MYOPIA_API const char* myopia_last_error(void);

/* ---- configuration ---- */

MYOPIA_API size_t myopia_preset_count(void);
/* NULL when i is out of range. */
MYOPIA_API const char* myopia_preset_name(size_t i);

MYOPIA_API myopia_status myopia_config_from_preset(const char* name, myopia_config** out);
MYOPIA_API myopia_status myopia_config_parse(const char* text, myopia_config** out);
MYOPIA_API myopia_status myopia_config_load(const char* path, myopia_config** out);
MYOPIA_API void myopia_config_free(myopia_config* config);

/* Writes the config text into buf (NUL-terminated, truncated to cap). *needed
   receives the full length including the terminator; buf may be NULL when cap is 0. */
MYOPIA_API myopia_status myopia_config_text(const myopia_config* config, char* buf, size_t cap,
                                            size_t* needed);
MYOPIA_API myopia_status myopia_config_save(const myopia_config* config, const char* path);

/* "gap", "psychometric" or "memory"; owned by the config. */
MYOPIA_API const char* myopia_config_model(const myopia_config* config);
MYOPIA_API uint64_t myopia_config_seed(const myopia_config* config);
MYOPIA_API int myopia_config_replications(const myopia_config* config);

MYOPIA_API myopia_status myopia_config_set_strategy(myopia_config* config, myopia_strategy strategy,
                                                    int horizon);
MYOPIA_API myopia_status myopia_config_set_trials(myopia_config* config, int trials);
MYOPIA_API myopia_status myopia_config_set_replications(myopia_config* config, int replications);
MYOPIA_API myopia_status myopia_config_set_seed(myopia_config* config, uint64_t seed);
MYOPIA_API myopia_status myopia_config_set_diagnostics(myopia_config* config, int enabled,
                                                       int replications);

/* ---- campaigns ---- */

/* threads == 0 uses the hardware concurrency. Results do not depend on threads. */
MYOPIA_API myopia_status myopia_run(const myopia_config* config, unsigned threads,
                                    myopia_metrics** out);

/* Runs myopic, T-step ahead and global T-step variants of config; out must hold 3 handles. */
MYOPIA_API myopia_status myopia_compare(const myopia_config* config, unsigned threads,
                                        myopia_metrics** out, size_t count);

MYOPIA_API void myopia_metrics_free(myopia_metrics* metrics);
MYOPIA_API size_t myopia_metrics_trials(const myopia_metrics* metrics);
MYOPIA_API myopia_status myopia_metrics_row(const myopia_metrics* metrics, size_t index,
                                            myopia_trial_row* out);
/* Smallest utility difference over every diagnosed replication and trial (0 without diagnostics). */
MYOPIA_API double myopia_metrics_min_ud(const myopia_metrics* metrics);

MYOPIA_API myopia_status myopia_metrics_write_csv(const myopia_metrics* metrics, const char* path);
/* Replication-averaged decomposition curves at the listed 1-based trials. */
MYOPIA_API myopia_status myopia_metrics_write_curves(const myopia_metrics* metrics,
                                                     const int* trials, size_t count,
                                                     const char* path);
MYOPIA_API myopia_status myopia_write_comparison(const myopia_metrics* const* tables, size_t count,
                                                 const char* path);

/* JSON manifest listing the config, engine version, seed and every output file. */
MYOPIA_API myopia_status myopia_write_manifest(const char* path, const char* command,
                                               const myopia_config* config,
                                               const char* const* outputs, size_t count);

/* ---- verification ---- */

MYOPIA_API myopia_status myopia_oracle_battery(uint64_t seed, size_t instances,
                                               myopia_oracle_report* out);

#ifdef __cplusplus
}
#endif

#endif /* MYOPIA_MYOPIA_H */
