#include "dchain/bounds.hpp"

#include <cmath>
#include <limits>

#include "dchain/format.hpp"

namespace dchain {

namespace {

using ld = long double;

constexpr double kNormalizeTop = 700.0;

// log_b(x), exact when b = 2 and x is a power of two.
ld log_in(ld x, LogBase base) {
  if (base == LogBase::Two) {
    int e = 0;
    if (std::frexp(x, &e) == 0.5L) return e - 1;
    return std::log2(x);
  }
  return std::log(x);
}

std::int64_t floor_to_int(ld v) { return static_cast<std::int64_t>(std::floor(v)); }

void require_depth(std::uint64_t depth) {
  if (depth < 1) throw ContractError("depth must be at least 1");
}

// y such that exp^g(y) = exp^g(x) - delta, for exp^g(x) > delta > 0.
double shift_down(std::uint64_t g, double x, double delta) {
  while (g > 0) {
    double inner = x;
    for (std::uint64_t i = 0; i < g && std::isfinite(inner); ++i) inner = std::exp(inner);
    // Past double range the correction is below the resolution of x.
    if (!std::isfinite(inner)) return x;
    if (delta >= inner) throw ContractError("tower quotient left the exponential regime");
    const double rel = delta / inner;
    if (rel < std::numeric_limits<double>::epsilon() * 1e-3) return x;
    delta = -std::log1p(-rel);
    --g;
  }
  return x - delta;
}

}  // namespace

std::string to_string(LogBase b) { return b == LogBase::Two ? "2" : "e"; }

std::int64_t hat_d_poly(std::uint64_t depth, LogBase base) {
  require_depth(depth);
  return floor_to_int(static_cast<ld>(depth) - 2 - 4 * log_in(depth, base));
}

std::int64_t hat_d_puct(std::uint64_t depth, double c, LogBase base) {
  require_depth(depth);
  if (!(c > 0)) throw ContractError("c must be positive");
  const ld cd = static_cast<ld>(c) * depth;
  return floor_to_int(static_cast<ld>(depth) - 1 - 2 * log_in(cd, base));
}

std::int64_t uct_exp_count(std::uint64_t depth, LogBase base) {
  require_depth(depth);
  return floor_to_int(static_cast<ld>(depth) - 3 * log_in(depth, base) - 3);
}

std::optional<double> DoubleExp::log10_magnitude() const {
  if (!k_) return std::nullopt;
  return std::ldexp(std::log10(2.0), static_cast<int>(*k_));
}

std::string DoubleExp::to_string() const {
  if (!k_) return "vacuous";
  return "2^(2^" + std::to_string(*k_) + ")";
}

TowerValue TowerValue::normalized(std::uint64_t height, double top) {
  if (std::isnan(top)) throw ContractError("tower top is NaN");
  while (top >= kNormalizeTop) {
    top = std::log(top);
    ++height;
  }
  while (height > 0 && std::exp(top) < kNormalizeTop) {
    top = std::exp(top);
    --height;
  }
  return {height, top};
}

double TowerValue::to_double() const {
  double v = top;
  for (std::uint64_t i = 0; i < height && std::isfinite(v); ++i) v = std::exp(v);
  return v;
}

TowerValue TowerValue::exp_of_quotient(double c) const {
  if (!(c > 0)) throw ContractError("divisor must be positive");
  const TowerValue v = normalized(height, top);
  if (v.height == 0) return normalized(1, v.top / c);
  // exp^h(x) / c = exp(exp^{h-1}(x) - ln c)
  return normalized(v.height + 1, shift_down(v.height - 1, v.top, std::log(c)));
}

std::string TowerValue::to_string() const {
  if (height == 0) return format_double(top);
  return "exp^" + std::to_string(height) + "(" + format_double(top) + ")";
}

std::partial_ordering operator<=>(const TowerValue& a, const TowerValue& b) {
  if (a.height == b.height) return a.top <=> b.top;
  const bool a_lower = a.height < b.height;
  const TowerValue& lo = a_lower ? a : b;
  const TowerValue& hi = a_lower ? b : a;
  double x = lo.top;
  for (std::uint64_t h = lo.height; h < hi.height; ++h) {
    // exp^h(x) with x <= 0 is below exp^h(1) <= exp^hi.height(hi.top) when hi.top >= 0.
    if (x <= 0) return a_lower ? std::partial_ordering::less : std::partial_ordering::greater;
    x = std::log(x);
  }
  const auto cmp = x <=> hi.top;
  if (a_lower) return cmp;
  return 0 <=> cmp;
}

TowerValue uct_tower(std::uint64_t depth, std::int64_t k) {
  if (depth < 2) throw ContractError("tower needs depth >= 2");
  if (k < 0) throw ContractError("exp count must be non-negative");
  const double D = static_cast<double>(depth);
  TowerValue v = TowerValue::from_double(4 * D * D * D);
  for (std::int64_t i = 0; i < k; ++i) v = v.exp_of_quotient(2 * D * D);
  return v;
}

FixedPointReport check_fixed_point(std::uint64_t depth) {
  if (depth < 2) throw ContractError("fixed point check needs depth >= 2");
  const ld D = depth;
  FixedPointReport rep;
  rep.log_lhs = static_cast<double>(2 * D);
  const ld rhs = std::log(ld{8}) + 3 * std::log(D);
  rep.log_rhs = static_cast<double>(rhs);
  rep.holds = 2 * D >= rhs;

  const double scale = 2.0 * static_cast<double>(depth) * static_cast<double>(depth);
  double m = 1.0;
  for (rep.iterations = 0; rep.iterations < 100000; ++rep.iterations) {
    const double next = std::exp(m / scale);
    if (next == m) break;
    m = next;
  }
  rep.small_start_limit = m;
  return rep;
}

Log2Bound poly_best_bound(std::uint64_t depth) {
  if (depth < 2) throw ContractError("bound needs depth >= 2");
  const ld log_d = log_in(depth, LogBase::Two);
  Log2Bound best;
  for (std::uint64_t d = 0; d < depth && d < 16000; ++d) {
    const ld value = std::ldexp(ld{1}, static_cast<int>(d)) *
                     (static_cast<ld>(depth) - d - 1 - 4 * log_d);
    if (value > 0 && (!best.log2 || value > *best.log2)) {
      best.log2 = static_cast<double>(value);
      best.best_d = d;
    }
  }
  return best;
}

}  // namespace dchain
