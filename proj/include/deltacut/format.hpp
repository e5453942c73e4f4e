#pragma once

#include <cstdio>
#include <string>

namespace deltacut {

/// Shortest-safe text for a double: 17 significant digits, "%.17g".
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace deltacut
