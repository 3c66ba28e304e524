#pragma once

#include <atomic>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "densitrace/errors.hpp"

namespace densitrace {

using BigInt = boost::multiprecision::cpp_int;

/// A packed binary string.
///
/// Indexing follows the 1-based convention used throughout this project:
/// at(1) is the first bit and at(-1) the last, so for s = 1001 we have
/// s.at(1) = 1, s.at(2) = 0, s.at(-1) = 1, s.at(-2) = 0. Internal storage
/// is LSB-first within 64-bit words; bit(i) gives 0-based access.
class BitString {
 public:
  BitString() = default;
  BitString(std::initializer_list<int> bits);

  /// Parses an ASCII string of '0'/'1' characters (most significant first).
  /// Throws InvalidCharacter on any other byte or on empty input.
  static BitString parse(std::string_view text);

  /// Reconstructs the k-bit string whose integer encoding is `code`
  /// (first bit is the highest-order bit of the code).
  static BitString from_code(std::uint64_t code, std::size_t k);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  /// 0-based bit access, no bounds check beyond debug assertions.
  int bit(std::size_t pos) const {
    return static_cast<int>((words_[pos >> 6] >> (pos & 63)) & 1u);
  }

  /// 1-based access; negative indices count from the right.
  int at(long long index) const;

  void push_back(int bit);
  void reserve(std::size_t bits) { words_.reserve((bits + 63) / 64); }
  void clear();

  /// Replaces the contents with `count` bits taken LSB-first from `word`
  /// (count <= 64). Reuses existing capacity.
  void assign_packed(std::uint64_t word, std::size_t count);

  /// Raw LSB-first storage words, for hot loops.
  const std::uint64_t* words() const { return words_.data(); }

  /// Inclusive slice s[i..j] with 1-based, possibly negative endpoints.
  /// The empty slice (resolved i == resolved j + 1) is allowed; anything
  /// else out of order or out of bounds throws OutOfRange.
  BitString slice(long long i, long long j) const;

  /// s[2:-2]: the string with both endpoints removed. Defined for size >= 2
  /// (the interior of a 2-bit string is empty); throws KTooSmall below that.
  BitString interior() const;

  /// Integer encoding of the whole string, first bit highest-order.
  /// Requires size() <= 64.
  std::uint64_t code() const;

  /// Integer encoding of the k bits starting at 0-based position `pos`.
  std::uint64_t code_at(std::size_t pos, std::size_t k) const;

  std::string str() const;

  bool operator==(const BitString& other) const;
  bool operator!=(const BitString& other) const { return !(*this == other); }
  /// Lexicographic order on the bit text (same-length strings compare
  /// numerically; a proper prefix sorts first).
  bool operator<(const BitString& other) const;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

/// Number of distinct deletion patterns turning y into x (the string
/// generalization of the binomial coefficient). Zero when x is not a
/// subsequence of y; 1 when x == y and when x is empty. Exact at any size.
BigInt subseq_count(const BitString& y, const BitString& x);

/// binom(y[2:-2], x[2:-2]) * q^(|y|-|x|), evaluated by a single dynamic
/// program that folds the weight q into every deletion step, so the value
/// stays bounded for q < 1 even when the integer count would overflow.
///
/// Requires |x| >= 2 (KTooSmall), |y| >= |x| (OutOfRange), and matching
/// first/last bits (EndpointMismatch).
double weighted_interior_count(const BitString& y, const BitString& x, double q);

/// All length-`len` supersequences of x sharing x's first and last bit,
/// in lexicographic order. Exhaustive (2^(len-2) candidates); guarded at
/// len <= 20 and intended for tests and identity checks only — the trace
/// estimators never enumerate these sets.
std::vector<BitString> enumerate_supersequences(const BitString& x, std::size_t len);

namespace stats {
/// Counts calls to enumerate_supersequences; lets tests assert that the
/// production estimators never fall back to enumeration.
std::atomic<std::uint64_t>& supersequence_enumerations();
}  // namespace stats

}  // namespace densitrace
