#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace fgft {

/// Shortest-safe text form of a double: 17 significant digits, which
/// round-trips exactly. NaN prints as "nan".
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace fgft
