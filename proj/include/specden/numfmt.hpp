#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace specden {

// Shortest round-trip decimal form; byte-stable across runs.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{}) throw std::invalid_argument("bad number: " + std::string(s));
  return v;
}

}  // namespace specden
