#include "densitrace/bitstring.hpp"

#include <algorithm>

namespace densitrace {

BitString::BitString(std::initializer_list<int> bits) {
  reserve(bits.size());
  for (int b : bits) push_back(b);
}

BitString BitString::parse(std::string_view text) {
  if (text.empty()) {
    throw InvalidCharacter("empty bit string");
  }
  BitString out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw InvalidCharacter(std::string("invalid character '") + c + "' in bit string");
    }
    out.push_back(c - '0');
  }
  return out;
}

BitString BitString::from_code(std::uint64_t code, std::size_t k) {
  if (k > 64) {
    throw OutOfRange("from_code supports at most 64 bits");
  }
  BitString out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.push_back(static_cast<int>((code >> (k - 1 - i)) & 1u));
  }
  return out;
}

int BitString::at(long long index) const {
  long long resolved = index;
  if (index < 0) resolved = static_cast<long long>(size_) + 1 + index;
  if (resolved < 1 || resolved > static_cast<long long>(size_)) {
    throw OutOfRange("bit index " + std::to_string(index) + " out of range for length " +
                     std::to_string(size_));
  }
  return bit(static_cast<std::size_t>(resolved - 1));
}

void BitString::push_back(int b) {
  const std::size_t word = size_ >> 6;
  if (word == words_.size()) words_.push_back(0);
  if (b) words_[word] |= (std::uint64_t{1} << (size_ & 63));
  ++size_;
}

void BitString::clear() {
  words_.clear();
  size_ = 0;
}

void BitString::assign_packed(std::uint64_t word, std::size_t count) {
  if (count > 64) throw OutOfRange("assign_packed takes at most 64 bits");
  words_.assign(1, count == 64 ? word : (word & ((std::uint64_t{1} << count) - 1)));
  size_ = count;
}

BitString BitString::slice(long long i, long long j) const {
  const long long n = static_cast<long long>(size_);
  long long lo = i < 0 ? n + 1 + i : i;
  long long hi = j < 0 ? n + 1 + j : j;
  if (i == 0 || j == 0 || lo < 1 || hi + 1 < lo || hi > n) {
    throw OutOfRange("slice [" + std::to_string(i) + ":" + std::to_string(j) +
                     "] invalid for length " + std::to_string(n));
  }
  BitString out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (long long pos = lo; pos <= hi; ++pos) {
    out.push_back(bit(static_cast<std::size_t>(pos - 1)));
  }
  return out;
}

BitString BitString::interior() const {
  if (size_ < 2) {
    throw KTooSmall("interior undefined for strings shorter than 2");
  }
  return slice(2, -2);
}

std::uint64_t BitString::code() const { return code_at(0, size_); }

std::uint64_t BitString::code_at(std::size_t pos, std::size_t k) const {
  if (k > 64 || pos + k > size_) {
    throw OutOfRange("code window out of range");
  }
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < k; ++i) {
    value = (value << 1) | static_cast<std::uint64_t>(bit(pos + i));
  }
  return value;
}

std::string BitString::str() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (bit(i)) out[i] = '1';
  }
  return out;
}

bool BitString::operator==(const BitString& other) const {
  if (size_ != other.size_) return false;
  const std::size_t full = size_ >> 6;
  for (std::size_t w = 0; w < full; ++w) {
    if (words_[w] != other.words_[w]) return false;
  }
  const std::size_t rem = size_ & 63;
  if (rem) {
    const std::uint64_t mask = (std::uint64_t{1} << rem) - 1;
    if ((words_[full] & mask) != (other.words_[full] & mask)) return false;
  }
  return true;
}

bool BitString::operator<(const BitString& other) const {
  const std::size_t common = std::min(size_, other.size_);
  for (std::size_t i = 0; i < common; ++i) {
    const int a = bit(i);
    const int b = other.bit(i);
    if (a != b) return a < b;
  }
  return size_ < other.size_;
}

BigInt subseq_count(const BitString& y, const BitString& x) {
  const std::size_t n = y.size();
  const std::size_t m = x.size();
  if (m > n) return 0;
  if (m == 0) return 1;
  // row[b] = number of embeddings of x[1..b] into the prefix of y seen so far
  std::vector<BigInt> row(m + 1);
  row[0] = 1;
  for (std::size_t a = 0; a < n; ++a) {
    const int c = y.bit(a);
    const std::size_t top = std::min(m, a + 1);
    for (std::size_t b = top; b >= 1; --b) {
      if (c == x.bit(b - 1)) row[b] += row[b - 1];
    }
  }
  return row[m];
}

double weighted_interior_count(const BitString& y, const BitString& x, double q) {
  if (x.size() < 2) {
    throw KTooSmall("weighted_interior_count requires |x| >= 2");
  }
  if (y.size() < x.size()) {
    throw OutOfRange("weighted_interior_count requires |y| >= |x|");
  }
  if (y.at(1) != x.at(1) || y.at(-1) != x.at(-1)) {
    throw EndpointMismatch("first/last bits of y and x differ");
  }
  const std::size_t flen = y.size() - 2;  // interior of y
  const std::size_t glen = x.size() - 2;  // interior of x
  // row[b] = sum over embeddings of the first b interior bits of x into the
  // consumed interior prefix of y, each weighted q^(#skipped characters)
  std::vector<double> row(glen + 1, 0.0);
  row[0] = 1.0;
  for (std::size_t a = 0; a < flen; ++a) {
    const int c = y.bit(a + 1);
    for (std::size_t b = glen; b >= 1; --b) {
      row[b] = q * row[b] + (c == x.bit(b) ? row[b - 1] : 0.0);
    }
    row[0] *= q;
  }
  return row[glen];
}

std::vector<BitString> enumerate_supersequences(const BitString& x, std::size_t len) {
  if (x.size() < 2) {
    throw KTooSmall("supersequence sets are defined for |x| >= 2");
  }
  if (len < x.size()) {
    throw OutOfRange("supersequence length below |x|");
  }
  if (len > 20) {
    throw GuardExceeded("supersequence enumeration guarded at length 20");
  }
  stats::supersequence_enumerations().fetch_add(1, std::memory_order_relaxed);

  std::vector<BitString> out;
  const std::size_t mid = len - 2;
  for (std::uint64_t inner = 0; inner < (std::uint64_t{1} << mid); ++inner) {
    BitString y;
    y.reserve(len);
    y.push_back(x.at(1));
    for (std::size_t i = 0; i < mid; ++i) {
      y.push_back(static_cast<int>((inner >> (mid - 1 - i)) & 1u));
    }
    y.push_back(x.at(-1));
    if (subseq_count(y, x) > 0) out.push_back(std::move(y));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace stats {
std::atomic<std::uint64_t>& supersequence_enumerations() {
  static std::atomic<std::uint64_t> counter{0};
  return counter;
}
}  // namespace stats

}  // namespace densitrace
