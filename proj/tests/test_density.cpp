#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "densitrace/density.hpp"
#include "densitrace/exact_oracle.hpp"
#include "densitrace/parallel.hpp"
#include "densitrace/warnings.hpp"
#include "helpers.hpp"

using namespace densitrace;
using densitrace::testing::all_strings;
using densitrace::testing::random_bits;

TEST_CASE("position probability estimates") {
  const BitString s = BitString::parse("1001101010");
  const TraceSet clean = sample_traces(s, ChannelParams(0.0, 1), 1);
  CHECK(estimate_position_prob(clean, BitString::parse("011"), 3) == 1.0);
  CHECK(estimate_position_prob(clean, BitString::parse("111"), 3) == 0.0);
  CHECK(estimate_position_prob(clean, BitString::parse("10011010101"), 1) == 0.0);

  CHECK_THROWS_AS(estimate_position_prob(TraceSet{}, s, 1), EmptyTraceSet);
  CHECK_THROWS_AS(estimate_position_prob(clean, s, 0), OutOfRange);
}

TEST_CASE("position probability estimates agree with the oracle") {
  SplitMix64 rng(51);
  const BitString s = random_bits(rng, 10);
  const double p = 0.2;
  const std::size_t trials = 10000;
  const ExactStats stats = exact_statistics(s, p, 2);
  const TraceSet traces = sample_traces(s, ChannelParams(p, 99), trials);
  for (const auto& x : all_strings(3)) {
    for (std::size_t i = 1; i <= 8; ++i) {
      const double exact = stats.position_prob(x, i);
      const double estimated = estimate_position_prob(traces, x, i);
      const double sigma = std::sqrt(std::max(exact * (1.0 - exact), 1e-12) /
                                     static_cast<double>(trials));
      CHECK(std::fabs(estimated - exact) <= 5.0 * sigma + 1e-12);
    }
  }
}

TEST_CASE("expansion coefficients") {
  CHECK(expansion_coefficient(BitString::parse("101"), BitString::parse("1001")) == 2);
  // one more inserted bit flips the sign
  CHECK(expansion_coefficient(BitString::parse("101"), BitString::parse("10001")) < 0);

  CHECK_THROWS_AS(expansion_coefficient(BitString::parse("101"), BitString::parse("0101")),
                  EndpointMismatch);
  CHECK_THROWS_AS(expansion_coefficient(BitString::parse("101"), BitString::parse("101")),
                  OutOfRange);
  CHECK_THROWS_AS(expansion_coefficient(BitString::parse("1"), BitString::parse("11")),
                  KTooSmall);

  // sign alternates with the number of inserted bits
  SplitMix64 rng(52);
  for (int rep = 0; rep < 100; ++rep) {
    const BitString x = random_bits(rng, 2 + (rng.next() % 3));
    const std::size_t extra = 1 + (rng.next() % 3);
    const auto supers = enumerate_supersequences(x, x.size() + extra);
    for (const auto& y : supers) {
      const BigInt coeff = expansion_coefficient(x, y);
      const BigInt magnitude = subseq_count(y.interior(), x.interior());
      CHECK(coeff == (extra % 2 == 1 ? magnitude : -magnitude));
    }
  }
}

TEST_CASE("p = 0 estimate is the indicator map") {
  SplitMix64 rng(53);
  const BitString s = random_bits(rng, 12);
  const TraceSet traces = sample_traces(s, ChannelParams(0.0, 1), 1);
  for (std::size_t k : {std::size_t{2}, std::size_t{3}}) {
    const DensityMap estimated = estimate_density_map(traces, k, 0.0);
    const DensityMap exact = exact_density_map(s, k, 0.0);
    CHECK(estimated == exact);
  }
}

TEST_CASE("full-map scan equals entrywise scans bit for bit") {
  SplitMix64 rng(54);
  const BitString s = random_bits(rng, 12);
  for (std::size_t k : {std::size_t{2}, std::size_t{3}, std::size_t{4}}) {
    const double p = 0.25;
    const TraceSet traces = sample_traces(s, ChannelParams(p, 11), 500);
    const DensityMap map = estimate_density_map(traces, k, p);
    for (const auto& x : all_strings(k)) {
      for (std::size_t i = 1; i <= map.positions(); ++i) {
        CHECK(map.at(x.code(), i) == estimate_density_entry(traces, x, i, p));
      }
    }
  }
}

TEST_CASE("estimates are deterministic across thread counts and streaming") {
  SplitMix64 rng(55);
  const BitString s = random_bits(rng, 20);
  const ChannelParams params(0.25, 321);
  const std::size_t trials = 20000;
  const TraceSet traces = sample_traces(s, params, trials);

  set_worker_threads(1);
  const DensityMap single = estimate_density_map(traces, 3, params.p);
  set_worker_threads(8);
  const DensityMap octo = estimate_density_map(traces, 3, params.p);
  const DensityMap streamed = estimate_density_map_streamed(s, params, trials, 3);
  set_worker_threads(0);

  CHECK(single == octo);
  CHECK(single == streamed);
}

TEST_CASE("single-trace estimates average to the exact map") {
  // the estimator is linear in the traces, so the T-trace estimate is the
  // mean of T single-trace estimates; chunked means give its standard error
  SplitMix64 rng(56);
  const BitString s = random_bits(rng, 10);
  const double p = 0.25;
  const std::size_t k = 3;
  const DensityMap exact = exact_density_map(s, k, p);

  const std::size_t chunks = 100;
  const std::size_t per_chunk = 1000;
  const BitString x = BitString::from_code(s.code_at(2, k), k);  // an occurring 3-mer
  const std::size_t i = 2;

  std::vector<double> chunk_means;
  for (std::size_t chunk = 0; chunk < chunks; ++chunk) {
    const TraceSet traces = sample_traces(s, ChannelParams(p, 1000 + chunk), per_chunk);
    chunk_means.push_back(estimate_density_entry(traces, x, i, p));
  }
  double mean = 0.0;
  for (double v : chunk_means) mean += v;
  mean /= static_cast<double>(chunks);
  double var = 0.0;
  for (double v : chunk_means) var += (v - mean) * (v - mean);
  var /= static_cast<double>(chunks - 1);
  const double stderr_mean = std::sqrt(var / static_cast<double>(chunks));

  CHECK(std::fabs(mean - exact.at(x.code(), i)) <= 4.0 * stderr_mean + 1e-12);
}

TEST_CASE("supersequence expansion on exact probabilities reproduces the exact map") {
  SplitMix64 rng(57);
  for (int rep = 0; rep < 2; ++rep) {
    const std::size_t n = 9 + rep;
    const BitString s = random_bits(rng, n);
    for (double p : {0.1, 0.4}) {
      for (std::size_t k : {std::size_t{2}, std::size_t{3}}) {
        const ExactStats stats = exact_statistics(s, p, k);
        const DensityMap exact = exact_density_map(s, k, p);
        auto prob = [&](const BitString& y, std::size_t i) {
          return stats.position_prob(y, i);
        };
        for (const auto& x : all_strings(k)) {
          for (std::size_t i = 1; i <= exact.positions(); ++i) {
            const double got = density_entry_via_supersequences(prob, n, x, i, p);
            CHECK(std::fabs(got - exact.at(x.code(), i)) <= 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("trace scans never enumerate supersequence sets") {
  // n = 200, T = 10^4: far beyond anything enumerable, and still a plain
  // quadratic scan per trace
  SplitMix64 rng(58);
  const BitString s = random_bits(rng, 200);
  const ChannelParams params(0.3, 5);
  const auto before = stats::supersequence_enumerations().load();
  const TraceSet traces = sample_traces(s, params, 10000);
  (void)estimate_density_map(traces, 3, params.p);
  (void)estimate_density_map_streamed(s, params, 2000, 2);
  for (const auto& x : all_strings(2)) (void)estimate_density_entry(traces, x, 5, params.p);
  CHECK(stats::supersequence_enumerations().load() == before);
}

TEST_CASE("converged map estimates sum to the number of k-mer positions") {
  SplitMix64 rng(62);
  const BitString s = random_bits(rng, 20);
  const DensityMap map = estimate_density_map_streamed(s, ChannelParams(0.2, 4), 100000, 3);
  CHECK(std::fabs(map.total() - 18.0) < 0.1);
}

TEST_CASE("estimator warns once p reaches 0.5") {
  SplitMix64 rng(59);
  const BitString s = random_bits(rng, 10);
  const TraceSet traces = sample_traces(s, ChannelParams(0.6, 2), 50);
  std::vector<std::string> seen;
  auto previous = set_warning_handler([&](std::string_view msg) { seen.emplace_back(msg); });
  (void)estimate_density_map(traces, 2, 0.6);
  set_warning_handler(previous);
  REQUIRE(seen.size() == 1);
  CHECK(seen[0].find("0.6") != std::string::npos);
}

TEST_CASE("estimator argument validation") {
  SplitMix64 rng(60);
  const BitString s = random_bits(rng, 8);
  const TraceSet traces = sample_traces(s, ChannelParams(0.2, 3), 10);
  CHECK_THROWS_AS(estimate_density_map(TraceSet{}, 2, 0.2), EmptyTraceSet);
  CHECK_THROWS_AS(estimate_density_map(traces, 1, 0.2), KTooSmall);
  CHECK_THROWS_AS(estimate_density_map(traces, 9, 0.2), OutOfRange);
  CHECK_THROWS_AS(estimate_density_map(traces, 2, 1.0), InvalidP);
}

TEST_CASE("density CSV round-trips exactly") {
  SplitMix64 rng(61);
  const BitString s = random_bits(rng, 14);
  const TraceSet traces = sample_traces(s, ChannelParams(0.3, 17), 400);
  const DensityMap map = estimate_density_map(traces, 3, 0.3);  // has negative entries

  bool any_negative = false;
  for (double v : map.flat()) any_negative = any_negative || v < 0.0;
  CHECK(any_negative);  // alternating-sign estimator, never clamped

  std::ostringstream out;
  write_density_csv(out, map, {"cmd=test"});
  std::istringstream in(out.str());
  const DensityMap back = read_density_csv(in);
  CHECK(back == map);
}
