#include "dchain/dchain.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>

#include "dchain/bounds.hpp"
#include "dchain/report.hpp"

struct dchain_record {
  dchain::RunReport report;
};

namespace {

thread_local std::string g_last_error;

dchain_status fail(dchain_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Maps exceptions escaping the core onto status codes.
template <typename F>
dchain_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return DCHAIN_OK;
  } catch (const dchain::ContractError& e) {
    return fail(DCHAIN_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::overflow_error& e) {
    return fail(DCHAIN_ERR_OVERFLOW, e.what());
  } catch (const std::out_of_range& e) {
    return fail(DCHAIN_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DCHAIN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DCHAIN_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dchain::LogBase to_base(dchain_log_base b) {
  switch (b) {
    case DCHAIN_LOG2: return dchain::LogBase::Two;
    case DCHAIN_LN: return dchain::LogBase::E;
  }
  throw dchain::ContractError("unknown log base");
}

dchain::Format to_format(dchain_format f) {
  switch (f) {
    case DCHAIN_FORMAT_TABLE: return dchain::Format::Table;
    case DCHAIN_FORMAT_JSON: return dchain::Format::Json;
    case DCHAIN_FORMAT_CSV: return dchain::Format::Csv;
  }
  throw dchain::ContractError("unknown format");
}

void split(dchain::u128 v, uint64_t* lo, uint64_t* hi) {
  *lo = static_cast<uint64_t>(v);
  *hi = static_cast<uint64_t>(v >> 64);
}

#define DCHAIN_REQUIRE(ptr)                                              \
  do {                                                                   \
    if (!(ptr)) return fail(DCHAIN_ERR_INVALID_ARGUMENT, #ptr " is null"); \
  } while (0)

}  // namespace

extern "C" {

dchain_run_options dchain_run_options_default(uint64_t depth) {
  return {depth, nullptr, DCHAIN_POLY_UCT, 0.0, 0.0, DCHAIN_MODE_FULL, 1000000};
}

const char* dchain_last_error(void) { return g_last_error.c_str(); }

const char* dchain_status_string(dchain_status status) {
  switch (status) {
    case DCHAIN_OK: return "ok";
    case DCHAIN_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DCHAIN_ERR_OVERFLOW: return "overflow";
    case DCHAIN_ERR_PARSE: return "parse error";
    case DCHAIN_ERR_STATE: return "invalid state";
    case DCHAIN_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void dchain_string_free(char* s) { std::free(s); }

dchain_status dchain_run(const dchain_run_options* options, dchain_record** out) {
  DCHAIN_REQUIRE(options);
  DCHAIN_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    dchain::PolicySpec policy;
    switch (options->variant) {
      case DCHAIN_POLY_UCT: policy.variant = dchain::Variant::PolyUct; break;
      case DCHAIN_UCT: policy.variant = dchain::Variant::Uct; break;
      case DCHAIN_PUCT: policy.variant = dchain::Variant::Puct; break;
      default: throw dchain::ContractError("unknown policy variant");
    }
    policy.c = options->c;
    policy.v_init = options->v_init;
    const dchain::Rational scale =
        options->scale ? dchain::parse_rational(options->scale) : dchain::Rational(1);
    dchain::ChainSpec spec(options->depth, scale);
    dchain::RunConfig config;
    switch (options->mode) {
      case DCHAIN_MODE_FULL: config.mode = dchain::Mode::FullTrajectory; break;
      case DCHAIN_MODE_ITER: config.mode = dchain::Mode::IterativeExpansion; break;
      default: throw dchain::ContractError("unknown mode");
    }
    config.budget = options->budget;
    auto rec = dchain::run_to_optimum(spec, policy, config);
    *out = new dchain_record{{std::move(rec), std::nullopt}};
  });
}

dchain_status dchain_record_from_json(const char* json, dchain_record** out) {
  DCHAIN_REQUIRE(json);
  DCHAIN_REQUIRE(out);
  *out = nullptr;
  const auto status = guarded([&] { *out = new dchain_record{dchain::from_json(json)}; });
  if (status == DCHAIN_ERR_INVALID_ARGUMENT) return fail(DCHAIN_ERR_PARSE, g_last_error);
  return status;
}

void dchain_record_free(dchain_record* record) { delete record; }

int dchain_record_reached(const dchain_record* record) {
  return record && record->report.record.reached ? 1 : 0;
}

uint64_t dchain_record_first_hit(const dchain_record* record) {
  return record ? record->report.record.first_hit : 0;
}

uint64_t dchain_record_depth(const dchain_record* record) {
  return record ? record->report.record.spec.depth() : 0;
}

uint64_t dchain_record_wall_ns(const dchain_record* record) {
  return record ? record->report.record.wall_ns : 0;
}

dchain_status dchain_record_depth_stats(const dchain_record* record, uint64_t d,
                                        dchain_depth_stats* out) {
  DCHAIN_REQUIRE(record);
  DCHAIN_REQUIRE(out);
  return guarded([&] {
    const auto& ledger = record->report.record.ledger;
    if (d > ledger.depth()) throw dchain::ContractError("depth out of range");
    *out = {};
    out->m_chain = ledger.chain(d).visits;
    split(ledger.chain(d).reward_sum_units, &out->sum_chain_lo, &out->sum_chain_hi);
    if (d > 0) {
      out->m_leaf = ledger.leaf(d).visits;
      split(ledger.leaf(d).reward_sum_units, &out->sum_leaf_lo, &out->sum_leaf_hi);
    }
  });
}

dchain_status dchain_record_verify(dchain_record* record) {
  DCHAIN_REQUIRE(record);
  return guarded([&] { record->report.checks = dchain::verify_all(record->report.record); });
}

dchain_status dchain_record_check_counts(const dchain_record* record, uint64_t* passed,
                                         uint64_t* failed) {
  DCHAIN_REQUIRE(record);
  if (!record->report.checks) return fail(DCHAIN_ERR_STATE, "record has not been verified");
  if (passed) *passed = dchain::count_passed(*record->report.checks);
  if (failed) *failed = dchain::count_failed(*record->report.checks);
  return DCHAIN_OK;
}

dchain_status dchain_record_render(const dchain_record* record, dchain_format format,
                                   int include_timing, char** out) {
  DCHAIN_REQUIRE(record);
  DCHAIN_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = copy_string(dchain::render(record->report, to_format(format), include_timing != 0));
  });
}

const char* dchain_csv_header(void) {
  static const std::string header = dchain::csv_header();
  return header.c_str();
}

dchain_status dchain_record_csv_row(const dchain_record* record, int include_timing, char** out) {
  DCHAIN_REQUIRE(record);
  DCHAIN_REQUIRE(out);
  *out = nullptr;
  return guarded(
      [&] { *out = copy_string(dchain::csv_row(record->report, include_timing != 0)); });
}

dchain_status dchain_hat_d_poly(uint64_t depth, dchain_log_base base, int64_t* out) {
  DCHAIN_REQUIRE(out);
  return guarded([&] { *out = dchain::hat_d_poly(depth, to_base(base)); });
}

dchain_status dchain_hat_d_puct(uint64_t depth, double c, dchain_log_base base, int64_t* out) {
  DCHAIN_REQUIRE(out);
  return guarded([&] { *out = dchain::hat_d_puct(depth, c, to_base(base)); });
}

dchain_status dchain_uct_exp_count(uint64_t depth, dchain_log_base base, int64_t* out) {
  DCHAIN_REQUIRE(out);
  return guarded([&] { *out = dchain::uct_exp_count(depth, to_base(base)); });
}

dchain_status dchain_uct_tower(uint64_t depth, int64_t k, dchain_tower* out) {
  DCHAIN_REQUIRE(out);
  return guarded([&] {
    const auto t = dchain::uct_tower(depth, k);
    *out = {t.height, t.top};
  });
}

int dchain_tower_compare(dchain_tower a, dchain_tower b) {
  const dchain::TowerValue ta{a.height, a.top}, tb{b.height, b.top};
  const auto cmp = ta <=> tb;
  if (cmp == std::partial_ordering::less) return -1;
  if (cmp == std::partial_ordering::greater) return 1;
  return 0;
}

dchain_status dchain_fixed_point(uint64_t depth, int* holds, double* small_start_limit) {
  return guarded([&] {
    const auto rep = dchain::check_fixed_point(depth);
    if (holds) *holds = rep.holds ? 1 : 0;
    if (small_start_limit) *small_start_limit = rep.small_start_limit;
  });
}

dchain_status dchain_poly_best_bound(uint64_t depth, int* vacuous, double* log2,
                                     uint64_t* best_d) {
  return guarded([&] {
    const auto b = dchain::poly_best_bound(depth);
    if (vacuous) *vacuous = b.is_vacuous() ? 1 : 0;
    if (log2) *log2 = b.log2.value_or(0.0);
    if (best_d) *best_d = b.best_d;
  });
}

dchain_status dchain_bounds_table(unsigned which, uint64_t lo, uint64_t hi, double c,
                                  unsigned bases, dchain_format format, char** out) {
  DCHAIN_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    if (which == 0 || (which & ~7u) != 0) throw dchain::ContractError("invalid bound selection");
    dchain::BoundsQuery q;
    q.poly = which & DCHAIN_BOUNDS_POLY;
    q.puct = which & DCHAIN_BOUNDS_PUCT;
    q.uct = which & DCHAIN_BOUNDS_UCT;
    q.lo = lo;
    q.hi = hi;
    q.c = c;
    q.base_two = bases & DCHAIN_BASE_2;
    q.base_e = bases & DCHAIN_BASE_E;
    *out = copy_string(dchain::bounds_table(q, to_format(format)));
  });
}

dchain_status dchain_bfs_steps(uint64_t depth, uint64_t* out) {
  DCHAIN_REQUIRE(out);
  return guarded([&] { *out = dchain::bfs_steps(depth); });
}

}  // extern "C"
