#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dchain/bounds.hpp"
#include "dchain/runner.hpp"
#include "dchain/verifier.hpp"

namespace dchain {

/// A run plus, once verified, its check reports.
struct RunReport {
  RunRecord record;
  std::optional<std::vector<CheckReport>> checks;
};

enum class Format { Table, Json, Csv };
Format parse_format(const std::string& name);

/// Emits wall_ns as 0 unless `include_timing`; everything else is a pure
/// function of the report, so repeated runs print identical bytes.
std::string to_json(const RunReport& report, bool include_timing);
RunReport from_json(const std::string& text);

std::string csv_header();
/// One row per run, no trailing newline.
std::string csv_row(const RunReport& report, bool include_timing);

std::string to_table(const RunReport& report, bool include_timing);

std::string render(const RunReport& report, Format format, bool include_timing);

/// Closed-form bound rows for D in [lo, hi].
struct BoundsQuery {
  bool poly = true;
  bool puct = true;
  bool uct = true;
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
  double c = 2.0;
  bool base_two = true;
  bool base_e = true;
};

std::string bounds_table(const BoundsQuery& query, Format format);

}  // namespace dchain
