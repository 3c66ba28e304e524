#pragma once

#include <cstdint>
#include <vector>

#include "densitrace/bitstring.hpp"
#include "densitrace/rng.hpp"

namespace densitrace::testing {

inline BitString random_bits(SplitMix64& rng, std::size_t length) {
  BitString s;
  s.reserve(length);
  for (std::size_t i = 0; i < length; ++i) s.push_back(static_cast<int>(rng.next() & 1u));
  return s;
}

/// Brute-force deletion-pattern count: enumerates every subset of y's
/// positions of size |x| and checks whether it spells x. Exponential, for
/// cross-checking the DP only.
inline std::uint64_t brute_subseq_count(const BitString& y, const BitString& x) {
  const std::size_t n = y.size();
  const std::size_t m = x.size();
  if (m > n) return 0;
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != m) continue;
    std::size_t b = 0;
    bool match = true;
    for (std::size_t i = 0; i < n && match; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        match = y.bit(i) == x.bit(b);
        ++b;
      }
    }
    count += match;
  }
  return count;
}

/// All binary strings of the given length, ascending.
inline std::vector<BitString> all_strings(std::size_t length) {
  std::vector<BitString> out;
  out.reserve(std::size_t{1} << length);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << length); ++code) {
    out.push_back(BitString::from_code(code, length));
  }
  return out;
}

}  // namespace densitrace::testing
