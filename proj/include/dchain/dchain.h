/*
 * dchain: simulator and verification harness for tree-search lower bounds
 * on the D-chain environment.
 *
 * C interface. Objects are opaque handles created by the library and
 * released with the matching *_free function. Every fallible call returns a
 * dchain_status; on failure dchain_last_error() describes the problem for
 * the calling thread.
 */
#ifndef DCHAIN_DCHAIN_H
#define DCHAIN_DCHAIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(DCHAIN_BUILDING)
#define DCHAIN_API __declspec(dllexport)
#else
#define DCHAIN_API __declspec(dllimport)
#endif
#else
#define DCHAIN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dchain_status {
  DCHAIN_OK = 0,
  DCHAIN_ERR_INVALID_ARGUMENT = 1,
  DCHAIN_ERR_OVERFLOW = 2,
  DCHAIN_ERR_PARSE = 3,
  DCHAIN_ERR_STATE = 4,
  DCHAIN_ERR_INTERNAL = 5
} dchain_status;

typedef enum dchain_variant {
  DCHAIN_POLY_UCT = 0,
  DCHAIN_UCT = 1,
  DCHAIN_PUCT = 2
} dchain_variant;

typedef enum dchain_mode {
  DCHAIN_MODE_FULL = 0, /* every trajectory ends at a terminal */
  DCHAIN_MODE_ITER = 1  /* one node expansion per trajectory */
} dchain_mode;

typedef enum dchain_log_base { DCHAIN_LOG2 = 0, DCHAIN_LN = 1 } dchain_log_base;

typedef enum dchain_format {
  DCHAIN_FORMAT_TABLE = 0,
  DCHAIN_FORMAT_JSON = 1,
  DCHAIN_FORMAT_CSV = 2
} dchain_format;

typedef struct dchain_run_options {
  uint64_t depth;
  const char *scale; /* "1", "5", "3/2" or "0.5"; NULL means 1 */
  dchain_variant variant;
  double c;      /* PUCT only, > 0 */
  double v_init; /* PUCT only, in [0, scale] */
  dchain_mode mode;
  uint64_t budget; /* 1 .. 2^62 trajectories */
} dchain_run_options;

/* Options for a PolyUCT full-trajectory run with a budget of 10^6. */
DCHAIN_API dchain_run_options dchain_run_options_default(uint64_t depth);

typedef struct dchain_record dchain_record;

typedef struct dchain_depth_stats {
  uint64_t m_chain;
  uint64_t sum_chain_lo; /* reward sums in units of scale/D, 128-bit */
  uint64_t sum_chain_hi;
  uint64_t m_leaf; /* 0 at d = 0, which has no side leaf */
  uint64_t sum_leaf_lo;
  uint64_t sum_leaf_hi;
} dchain_depth_stats;

typedef struct dchain_tower {
  uint64_t height;
  double top;
} dchain_tower;

DCHAIN_API const char *dchain_last_error(void);
DCHAIN_API const char *dchain_status_string(dchain_status status);
DCHAIN_API void dchain_string_free(char *s);

/* Runs until the optimal leaf is first reached or the budget is used up.
 * Budget exhaustion is not an error; check dchain_record_reached. */
DCHAIN_API dchain_status dchain_run(const dchain_run_options *options, dchain_record **out);
DCHAIN_API dchain_status dchain_record_from_json(const char *json, dchain_record **out);
DCHAIN_API void dchain_record_free(dchain_record *record);

DCHAIN_API int dchain_record_reached(const dchain_record *record);
/* Trajectories before the first optimal one. Meaningful only when reached. */
DCHAIN_API uint64_t dchain_record_first_hit(const dchain_record *record);
DCHAIN_API uint64_t dchain_record_depth(const dchain_record *record);
DCHAIN_API uint64_t dchain_record_wall_ns(const dchain_record *record);
DCHAIN_API dchain_status dchain_record_depth_stats(const dchain_record *record, uint64_t d,
                                                   dchain_depth_stats *out);

/* Runs every applicable verifier check and stores the reports on the record. */
DCHAIN_API dchain_status dchain_record_verify(dchain_record *record);
/* DCHAIN_ERR_STATE until dchain_record_verify has been called. */
DCHAIN_API dchain_status dchain_record_check_counts(const dchain_record *record,
                                                    uint64_t *passed, uint64_t *failed);

/* Renders the record (and its checks, if verified). wall_ns is printed as 0
 * unless include_timing is set. Free the result with dchain_string_free. */
DCHAIN_API dchain_status dchain_record_render(const dchain_record *record, dchain_format format,
                                              int include_timing, char **out);
/* CSV header and a single row without trailing newline. */
DCHAIN_API const char *dchain_csv_header(void);
DCHAIN_API dchain_status dchain_record_csv_row(const dchain_record *record, int include_timing,
                                               char **out);

/* Closed-form bounds. */
DCHAIN_API dchain_status dchain_hat_d_poly(uint64_t depth, dchain_log_base base, int64_t *out);
DCHAIN_API dchain_status dchain_hat_d_puct(uint64_t depth, double c, dchain_log_base base,
                                           int64_t *out);
DCHAIN_API dchain_status dchain_uct_exp_count(uint64_t depth, dchain_log_base base, int64_t *out);
DCHAIN_API dchain_status dchain_uct_tower(uint64_t depth, int64_t k, dchain_tower *out);
/* Negative, zero or positive as a is below, equal to or above b. */
DCHAIN_API int dchain_tower_compare(dchain_tower a, dchain_tower b);
DCHAIN_API dchain_status dchain_fixed_point(uint64_t depth, int *holds, double *small_start_limit);
DCHAIN_API dchain_status dchain_poly_best_bound(uint64_t depth, int *vacuous, double *log2,
                                                uint64_t *best_d);

enum {
  DCHAIN_BOUNDS_POLY = 1,
  DCHAIN_BOUNDS_PUCT = 2,
  DCHAIN_BOUNDS_UCT = 4
};
enum { DCHAIN_BASE_2 = 1, DCHAIN_BASE_E = 2 };

/* Bound table for D in [lo, hi]; `which` and `bases` are bit masks. */
DCHAIN_API dchain_status dchain_bounds_table(unsigned which, uint64_t lo, uint64_t hi, double c,
                                             unsigned bases, dchain_format format, char **out);

/* Breadth-first baseline: nodes dequeued up to the all-ones leaf, D <= 40. */
DCHAIN_API dchain_status dchain_bfs_steps(uint64_t depth, uint64_t *out);

#ifdef __cplusplus
}
#endif

#endif /* DCHAIN_DCHAIN_H */
