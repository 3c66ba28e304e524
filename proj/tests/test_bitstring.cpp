#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "densitrace/bitstring.hpp"
#include "helpers.hpp"

using namespace densitrace;
using densitrace::testing::all_strings;
using densitrace::testing::brute_subseq_count;
using densitrace::testing::random_bits;

TEST_CASE("parse and text round-trip") {
  const BitString s = BitString::parse("1001");
  CHECK(s.size() == 4);
  CHECK(s.bit(0) == 1);
  CHECK(s.bit(1) == 0);
  CHECK(s.bit(2) == 0);
  CHECK(s.bit(3) == 1);
  CHECK(s.str() == "1001");

  CHECK(BitString::parse("0").size() == 1);
  CHECK_THROWS_AS(BitString::parse("12"), InvalidCharacter);
  CHECK_THROWS_AS(BitString::parse(""), InvalidCharacter);

  SplitMix64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const BitString t = random_bits(rng, 1 + (rng.next() % 130));
    CHECK(BitString::parse(t.str()) == t);
  }
}

TEST_CASE("one-based and negative indexing") {
  const BitString s = BitString::parse("1001");
  CHECK(s.at(1) == 1);
  CHECK(s.at(2) == 0);
  CHECK(s.at(-1) == 1);
  CHECK(s.at(-2) == 0);
  CHECK_THROWS_AS(s.at(0), OutOfRange);
  CHECK_THROWS_AS(s.at(5), OutOfRange);
  CHECK_THROWS_AS(s.at(-5), OutOfRange);
}

TEST_CASE("slicing follows the signed-index convention") {
  const BitString s = BitString::parse("10101");
  CHECK(s.slice(1, 3).str() == "101");
  CHECK(s.slice(2, -2).str() == "010");
  CHECK(s.slice(1, -1) == s);
  CHECK(BitString::parse("10").slice(2, 1).empty());

  CHECK_THROWS_AS(s.slice(0, 3), OutOfRange);
  CHECK_THROWS_AS(s.slice(3, 0), OutOfRange);
  CHECK_THROWS_AS(s.slice(4, 2), OutOfRange);  // more than empty
  CHECK_THROWS_AS(s.slice(1, 6), OutOfRange);
  CHECK_THROWS_AS(s.slice(-6, 3), OutOfRange);
}

TEST_CASE("interior strips both endpoints") {
  CHECK(BitString::parse("10").interior().empty());
  CHECK(BitString::parse("101").interior().str() == "0");
  CHECK(BitString::parse("10011").interior().str() == "001");
  CHECK_THROWS_AS(BitString::parse("1").interior(), KTooSmall);
}

TEST_CASE("codes are numeric with the first bit highest") {
  CHECK(BitString::parse("101").code() == 5);
  CHECK(BitString::from_code(5, 3).str() == "101");
  CHECK(BitString::parse("00110").code_at(1, 3) == 3);  // "011"
  for (std::uint64_t code = 0; code < 32; ++code) {
    CHECK(BitString::from_code(code, 5).code() == code);
  }
}

TEST_CASE("deletion-pattern counts") {
  CHECK(subseq_count(BitString::parse("1011"), BitString::parse("101")) == 2);
  CHECK(subseq_count(BitString::parse("1011"), BitString()) == 1);

  SplitMix64 rng(23);
  for (int rep = 0; rep < 40; ++rep) {
    const BitString x = random_bits(rng, 1 + (rng.next() % 6));
    CHECK(subseq_count(x, x) == 1);
  }
}

TEST_CASE("deletion-pattern counts match exhaustive enumeration") {
  SplitMix64 rng(37);
  for (int rep = 0; rep < 120; ++rep) {
    const BitString y = random_bits(rng, 1 + (rng.next() % 10));
    const BitString x = random_bits(rng, 1 + (rng.next() % y.size()));
    const BigInt dp = subseq_count(y, x);
    CHECK(dp == brute_subseq_count(y, x));
    // never exceeds the plain binomial coefficient
    BigInt binom = 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
      binom = binom * static_cast<int>(y.size() - i) / static_cast<int>(i + 1);
    }
    CHECK(dp <= binom);
  }
}

TEST_CASE("weighted interior count") {
  CHECK(weighted_interior_count(BitString::parse("1001"), BitString::parse("101"), 0.5) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(weighted_interior_count(BitString::parse("1011"), BitString::parse("111"), 0.25) ==
        doctest::Approx(0.25).epsilon(1e-12));

  SplitMix64 rng(41);
  for (int rep = 0; rep < 60; ++rep) {
    const BitString x = random_bits(rng, 2 + (rng.next() % 4));
    CHECK(weighted_interior_count(x, x, 0.37) == doctest::Approx(1.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(
      weighted_interior_count(BitString::parse("1010"), BitString::parse("101"), 0.5),
      EndpointMismatch);
  CHECK_THROWS_AS(weighted_interior_count(BitString::parse("11"), BitString::parse("1"), 0.5),
                  KTooSmall);
  CHECK_THROWS_AS(weighted_interior_count(BitString::parse("11"), BitString::parse("1111"), 0.5),
                  OutOfRange);
}

TEST_CASE("weighted interior count equals the exact integer DP times q^(|y|-|x|)") {
  SplitMix64 rng(43);
  const double qs[] = {0.0, 0.1, 0.33, 0.5, 0.9};
  int checked = 0;
  while (checked < 200) {
    const std::size_t ylen = 2 + (rng.next() % 11);  // up to 12
    const std::size_t xlen = 2 + (rng.next() % ylen);
    if (xlen > ylen) continue;
    const BitString y = random_bits(rng, ylen);
    BitString x = random_bits(rng, xlen);
    if (y.at(1) != x.at(1) || y.at(-1) != x.at(-1)) continue;
    for (double q : qs) {
      const double expected = static_cast<double>(subseq_count(y.interior(), x.interior())) *
                              std::pow(q, static_cast<double>(ylen - xlen));
      const double got = weighted_interior_count(y, x, q);
      if (expected == 0.0) {
        CHECK(got == 0.0);
      } else {
        CHECK(got == doctest::Approx(expected).epsilon(1e-12));
      }
    }
    ++checked;
  }
}

TEST_CASE("supersequence enumeration") {
  const auto y4 = enumerate_supersequences(BitString::parse("101"), 4);
  std::set<std::string> got;
  for (const auto& y : y4) got.insert(y.str());
  CHECK(got == std::set<std::string>{"1001", "1011", "1101"});

  const auto self = enumerate_supersequences(BitString::parse("101"), 3);
  REQUIRE(self.size() == 1);
  CHECK(self[0].str() == "101");

  // cross-check against a filter over every length-5 string
  const auto y5 = enumerate_supersequences(BitString::parse("101"), 5);
  std::size_t expected = 0;
  for (const auto& cand : all_strings(5)) {
    if (cand.at(1) == 1 && cand.at(-1) == 1 &&
        subseq_count(cand, BitString::parse("101")) > 0) {
      ++expected;
    }
  }
  CHECK(y5.size() == expected);
  for (std::size_t i = 1; i < y5.size(); ++i) CHECK(y5[i - 1] < y5[i]);

  CHECK_THROWS_AS(enumerate_supersequences(BitString::parse("101"), 21), GuardExceeded);
  CHECK_THROWS_AS(enumerate_supersequences(BitString::parse("1"), 4), KTooSmall);
  CHECK_THROWS_AS(enumerate_supersequences(BitString::parse("101"), 2), OutOfRange);
}

TEST_CASE("enumeration calls bump the instrumentation counter") {
  const auto before = stats::supersequence_enumerations().load();
  (void)enumerate_supersequences(BitString::parse("11"), 4);
  CHECK(stats::supersequence_enumerations().load() == before + 1);
}

// The alternating double sum over intermediate strings h collapses to an
// equality indicator; this is the combinatorial fact behind the closed-form
// expansion coefficients. Full |f| <= 6 sweep lives in the acceptance suite.
TEST_CASE("alternating embedding-count sum collapses to the equality indicator") {
  for (std::size_t flen = 1; flen <= 4; ++flen) {
    for (const auto& f : all_strings(flen)) {
      for (std::size_t glen = 1; glen <= flen; ++glen) {
        for (const auto& g : all_strings(glen)) {
          BigInt sum = 0;
          for (std::size_t hlen = glen; hlen <= flen; ++hlen) {
            const BigInt sign = ((glen + hlen) % 2 == 0) ? 1 : -1;
            for (const auto& h : all_strings(hlen)) {
              sum += sign * subseq_count(f, h) * subseq_count(h, g);
            }
          }
          CHECK(sum == (f == g ? 1 : 0));
        }
      }
    }
  }
}
