#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace dchain {

/// 17 significant digits, enough to round-trip a double; "inf"/"-inf"/"nan".
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_double(long double v) { return format_double(static_cast<double>(v)); }

}  // namespace dchain
