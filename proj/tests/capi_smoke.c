#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "dchain/dchain.h"

static int failures = 0;

#define EXPECT(cond)                                            \
  do {                                                          \
    if (!(cond)) {                                              \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                               \
    }                                                           \
  } while (0)

static void golden_run(void) {
  dchain_run_options opt = dchain_run_options_default(2);
  dchain_record *rec = NULL;
  EXPECT(dchain_run(&opt, &rec) == DCHAIN_OK);
  if (!rec) return;
  EXPECT(dchain_record_reached(rec) == 1);
  EXPECT(dchain_record_first_hit(rec) == 4);
  EXPECT(dchain_record_depth(rec) == 2);

  dchain_depth_stats st;
  EXPECT(dchain_record_depth_stats(rec, 1, &st) == DCHAIN_OK);
  EXPECT(st.m_chain == 1 && st.sum_chain_lo == 0);
  EXPECT(st.m_leaf == 3 && st.sum_leaf_lo == 3 && st.sum_leaf_hi == 0);
  EXPECT(dchain_record_depth_stats(rec, 3, &st) == DCHAIN_ERR_INVALID_ARGUMENT);

  uint64_t passed = 0, failed = 0;
  EXPECT(dchain_record_check_counts(rec, &passed, &failed) == DCHAIN_ERR_STATE);
  EXPECT(dchain_record_verify(rec) == DCHAIN_OK);
  EXPECT(dchain_record_check_counts(rec, &passed, &failed) == DCHAIN_OK);
  EXPECT(passed > 0 && failed == 0);

  char *json = NULL;
  EXPECT(dchain_record_render(rec, DCHAIN_FORMAT_JSON, 0, &json) == DCHAIN_OK);
  if (json) {
    dchain_record *back = NULL;
    EXPECT(dchain_record_from_json(json, &back) == DCHAIN_OK);
    char *again = NULL;
    EXPECT(dchain_record_render(back, DCHAIN_FORMAT_JSON, 0, &again) == DCHAIN_OK);
    EXPECT(again && strcmp(json, again) == 0);
    dchain_string_free(again);
    dchain_record_free(back);
  }
  dchain_string_free(json);

  char *row = NULL;
  EXPECT(dchain_record_csv_row(rec, 0, &row) == DCHAIN_OK);
  EXPECT(row && strncmp(row, "poly,0,0,2,1,full,", 18) == 0);
  dchain_string_free(row);
  EXPECT(strncmp(dchain_csv_header(), "policy,c,v_init,D,", 18) == 0);
  dchain_record_free(rec);
}

static void errors(void) {
  dchain_record *rec = NULL;
  EXPECT(dchain_run(NULL, &rec) == DCHAIN_ERR_INVALID_ARGUMENT);
  dchain_run_options opt = dchain_run_options_default(0);
  EXPECT(dchain_run(&opt, &rec) == DCHAIN_ERR_INVALID_ARGUMENT);
  EXPECT(rec == NULL);
  EXPECT(strlen(dchain_last_error()) > 0);

  opt = dchain_run_options_default(3);
  opt.variant = DCHAIN_PUCT;
  opt.c = -1.0;
  EXPECT(dchain_run(&opt, &rec) == DCHAIN_ERR_INVALID_ARGUMENT);
  opt.c = 2.0;
  opt.scale = "x";
  EXPECT(dchain_run(&opt, &rec) == DCHAIN_ERR_INVALID_ARGUMENT);

  EXPECT(dchain_record_from_json("{", &rec) == DCHAIN_ERR_PARSE);
  EXPECT(rec == NULL);
  EXPECT(strcmp(dchain_status_string(DCHAIN_ERR_PARSE), "parse error") == 0);
}

static void puct_iter(void) {
  dchain_run_options opt = dchain_run_options_default(1);
  opt.variant = DCHAIN_PUCT;
  opt.c = 2.0;
  opt.mode = DCHAIN_MODE_ITER;
  dchain_record *rec = NULL;
  EXPECT(dchain_run(&opt, &rec) == DCHAIN_OK);
  EXPECT(rec && dchain_record_reached(rec) && dchain_record_first_hit(rec) == 1);
  dchain_record_free(rec);

  opt = dchain_run_options_default(25);
  EXPECT(dchain_run(&opt, &rec) == DCHAIN_OK);
  EXPECT(rec && !dchain_record_reached(rec));
  dchain_record_free(rec);
}

static void bounds(void) {
  int64_t v = 0;
  EXPECT(dchain_hat_d_poly(25, DCHAIN_LOG2, &v) == DCHAIN_OK && v == 4);
  EXPECT(dchain_hat_d_poly(25, DCHAIN_LN, &v) == DCHAIN_OK && v == 10);
  EXPECT(dchain_hat_d_puct(20, 2.0, DCHAIN_LOG2, &v) == DCHAIN_OK && v == 8);
  EXPECT(dchain_hat_d_puct(20, 2.0, DCHAIN_LN, &v) == DCHAIN_OK && v == 11);
  EXPECT(dchain_uct_exp_count(16, DCHAIN_LOG2, &v) == DCHAIN_OK && v == 1);
  EXPECT(dchain_uct_exp_count(16, DCHAIN_LN, &v) == DCHAIN_OK && v == 4);

  dchain_tower t;
  EXPECT(dchain_uct_tower(16, 2, &t) == DCHAIN_OK);
  dchain_tower ref = {2, 25.0};
  EXPECT(dchain_tower_compare(t, ref) > 0);
  EXPECT(dchain_tower_compare(ref, t) < 0);
  EXPECT(dchain_tower_compare(t, t) == 0);
  EXPECT(dchain_uct_tower(16, -1, &t) == DCHAIN_ERR_INVALID_ARGUMENT);

  int holds = -1;
  double limit = 0.0;
  EXPECT(dchain_fixed_point(3, &holds, &limit) == DCHAIN_OK && holds == 1);
  EXPECT(dchain_fixed_point(2, &holds, &limit) == DCHAIN_OK && holds == 0 && limit < 2.0);

  int vacuous = -1;
  double log2 = 0.0;
  uint64_t best_d = 0;
  EXPECT(dchain_poly_best_bound(25, &vacuous, &log2, &best_d) == DCHAIN_OK);
  EXPECT(vacuous == 0 && best_d == 4 && log2 > 22.79 && log2 < 22.80);

  char *table = NULL;
  EXPECT(dchain_bounds_table(DCHAIN_BOUNDS_POLY, 25, 25, 2.0, DCHAIN_BASE_2 | DCHAIN_BASE_E,
                             DCHAIN_FORMAT_CSV, &table) == DCHAIN_OK);
  EXPECT(table && strstr(table, "poly,25,,4,2^(2^4),10,2^(2^10),yes") != NULL);
  dchain_string_free(table);
  EXPECT(dchain_bounds_table(0, 1, 2, 2.0, DCHAIN_BASE_2, DCHAIN_FORMAT_CSV, &table) ==
         DCHAIN_ERR_INVALID_ARGUMENT);

  uint64_t n = 0;
  EXPECT(dchain_bfs_steps(2, &n) == DCHAIN_OK && n == 7);
  EXPECT(dchain_bfs_steps(41, &n) == DCHAIN_ERR_INVALID_ARGUMENT);
}

int main(void) {
  golden_run();
  errors();
  puct_iter();
  bounds();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return EXIT_FAILURE;
  }
  puts("capi_smoke: ok");
  return EXIT_SUCCESS;
}
