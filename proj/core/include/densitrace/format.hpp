#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "densitrace/errors.hpp"

namespace densitrace {

/// Shortest decimal representation that round-trips the double exactly.
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw IoError("bad number: '" + std::string(text) + "'");
  }
  return value;
}

inline std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw IoError("bad integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace densitrace
