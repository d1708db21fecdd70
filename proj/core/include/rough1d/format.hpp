#pragma once

#include <cstdio>
#include <string>

namespace rough1d {

/// Shortest fixed form used by every file writer: 17 significant digits, so
/// a double survives a write/read cycle unchanged.
inline std::string format_g17(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

}  // namespace rough1d
