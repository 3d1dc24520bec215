#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace primeorder {

/// Shortest round-trip decimal form, independent of the global locale.
inline std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline std::string format_number(double value, int precision) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

}  // namespace primeorder
