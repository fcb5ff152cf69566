#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dchain/runner.hpp"

namespace dchain {

enum class Outcome { Pass, Fail, Skipped };

std::string to_string(Outcome o);
Outcome parse_outcome(const std::string& name);

/// One compared pair. `lhs >= rhs` (or `==`, per the entry name) is what
/// passes. Values are rendered as text: exact integers and fractions where
/// the comparison is exact, 17 significant digits otherwise.
struct CheckEntry {
  std::string name;
  std::optional<std::uint64_t> depth;
  std::string lhs;
  std::string rhs;
  Outcome outcome = Outcome::Skipped;
  bool informational = false;  // reported, never counted
  std::string note;

  friend bool operator==(const CheckEntry&, const CheckEntry&) = default;
};

struct CheckReport {
  std::string check;
  std::vector<CheckEntry> entries;

  std::size_t passed() const;
  std::size_t failed() const;
  std::size_t skipped() const;
  /// No counted entry failed. A fully skipped report is not a failure.
  bool ok() const { return failed() == 0; }

  friend bool operator==(const CheckReport&, const CheckReport&) = default;
};

/// Relative slack on comparisons involving square roots or logarithms.
inline constexpr long double kRelTolerance = 0x1p-40L;

// Conservation and exactness identities of the ledger itself. Unlike the
// derivation checks this applies to unreached records too.
CheckReport check_ledger_invariants(const RunRecord& record);

// The checks below need a reached record and cover depths 1..D-1.
CheckReport check_leaf_visits_and_means(const RunRecord& record);
CheckReport check_selection_dominance(const RunRecord& record);
CheckReport check_poly_recurrence(const RunRecord& record);
CheckReport check_doubling_chain(const RunRecord& record);
CheckReport check_global_unroll(const RunRecord& record);
CheckReport check_puct_recurrence(const RunRecord& record);
CheckReport check_uct_recurrence(const RunRecord& record);

/// Every check that applies to the record's variant.
std::vector<CheckReport> verify_all(const RunRecord& record);

std::size_t count_passed(const std::vector<CheckReport>& reports);
std::size_t count_failed(const std::vector<CheckReport>& reports);

}  // namespace dchain
