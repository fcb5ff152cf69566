#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "dchain/env.hpp"

namespace dchain {

/// The closed forms use log2; their quoted numeric examples only come out
/// under natural logs. Every calculator takes the base explicitly.
enum class LogBase { Two, E };

std::string to_string(LogBase b);

/// floor(D - 2 - 4 log_b D). May be negative.
std::int64_t hat_d_poly(std::uint64_t depth, LogBase base);
/// floor(D - 1 - 2 log_b(cD)).
std::int64_t hat_d_puct(std::uint64_t depth, double c, LogBase base);
/// floor(D - 3 log_b D - 3): number of exps in the UCT tower.
std::int64_t uct_exp_count(std::uint64_t depth, LogBase base);

/// exp2(exp2(k)), or Vacuous when the cutoff k is negative. Vacuous orders
/// below every proper value.
class DoubleExp {
 public:
  static DoubleExp vacuous() { return DoubleExp(); }
  static DoubleExp from_cutoff(std::int64_t k) {
    return k < 0 ? DoubleExp() : DoubleExp(k);
  }

  bool is_vacuous() const { return !k_.has_value(); }
  std::int64_t loglog2() const { return k_.value(); }
  /// log10 of the magnitude, 2^k * log10(2). Vacuous -> nullopt.
  std::optional<double> log10_magnitude() const;
  std::string to_string() const;

  friend bool operator==(const DoubleExp&, const DoubleExp&) = default;
  friend std::strong_ordering operator<=>(const DoubleExp& a, const DoubleExp& b) {
    if (a.is_vacuous() || b.is_vacuous()) return !a.is_vacuous() <=> !b.is_vacuous();
    return *a.k_ <=> *b.k_;
  }

 private:
  DoubleExp() = default;
  explicit DoubleExp(std::int64_t k) : k_(k) {}
  std::optional<std::int64_t> k_;
};

/// exp^height(top) with natural exps. Canonical form: top < 700, and at
/// height > 0 also exp(top) >= 700, so every value has one representation.
struct TowerValue {
  std::uint64_t height = 0;
  double top = 0.0;

  static TowerValue normalized(std::uint64_t height, double top);
  static TowerValue from_double(double v) { return normalized(0, v); }

  /// Plain double, +inf when it does not fit.
  double to_double() const;
  /// exp(this / c) for c > 0.
  TowerValue exp_of_quotient(double c) const;
  std::string to_string() const;

  /// Lifts the lower operand by logarithms to the common height.
  friend std::partial_ordering operator<=>(const TowerValue& a, const TowerValue& b);
  friend bool operator==(const TowerValue& a, const TowerValue& b) {
    return (a <=> b) == std::partial_ordering::equivalent;
  }
};

/// b <- exp(b / 2D^2) applied k times from b = 4D^3.
TowerValue uct_tower(std::uint64_t depth, std::int64_t k);

struct FixedPointReport {
  /// exp(2D) >= 8D^3, i.e. exp(m / 2D^2) >= 2m at m = 4D^3.
  bool holds = false;
  double log_lhs = 0.0;  // 2D
  double log_rhs = 0.0;  // ln(8 D^3)
  /// Limit of m <- exp(m / 2D^2) started from m = 1.
  double small_start_limit = 0.0;
  std::uint64_t iterations = 0;
};

FixedPointReport check_fixed_point(std::uint64_t depth);

/// log2 of the best certified PolyUCT bound, max over d of
/// 2^d (D - d - 1 - 4 log2 D); nullopt when vacuous.
struct Log2Bound {
  std::optional<double> log2;
  std::uint64_t best_d = 0;
  bool is_vacuous() const { return !log2.has_value(); }
};

Log2Bound poly_best_bound(std::uint64_t depth);

}  // namespace dchain
