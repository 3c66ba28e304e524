#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "densitrace/channel.hpp"
#include "densitrace/exact_oracle.hpp"
#include "densitrace/parallel.hpp"
#include "helpers.hpp"

using namespace densitrace;
using densitrace::testing::random_bits;

TEST_CASE("p = 0 is the identity channel") {
  const BitString s = BitString::parse("0101");
  const TraceSet ts = sample_traces(s, ChannelParams(0.0, 7), 3);
  REQUIRE(ts.count() == 3);
  for (const auto& t : ts.traces) CHECK(t == s);
}

TEST_CASE("near-total deletion still produces subsequences") {
  SplitMix64 rng(5);
  const BitString s = random_bits(rng, 8);
  const TraceSet ts = sample_traces(s, ChannelParams(0.999, 99), 60);
  std::size_t total_bits = 0;
  for (const auto& t : ts.traces) {
    total_bits += t.size();
    CHECK(subseq_count(s, t) >= 1);
  }
  CHECK(total_bits < 8);  // at p = 0.999 almost everything is gone
}

TEST_CASE("every trace is a subsequence of the source") {
  SplitMix64 rng(6);
  for (double p : {0.1, 0.5, 0.8}) {
    const BitString s = random_bits(rng, 24);
    const TraceSet ts = sample_traces(s, ChannelParams(p, 1234), 40);
    for (const auto& t : ts.traces) CHECK(subseq_count(s, t) >= 1);
  }
}

TEST_CASE("trace lengths concentrate around n(1-p)") {
  SplitMix64 rng(9);
  const BitString s = random_bits(rng, 1000);
  const TraceSet ts = sample_traces(s, ChannelParams(0.2, 4242), 200);
  double mean = 0.0;
  for (const auto& t : ts.traces) mean += static_cast<double>(t.size());
  mean /= 200.0;
  const double sigma = std::sqrt(1000.0 * 0.2 * 0.8);
  CHECK(std::fabs(mean - 800.0) < 3.0 * sigma);
}

TEST_CASE("generation is reproducible and thread-count independent") {
  SplitMix64 rng(10);
  const BitString s = random_bits(rng, 64);
  const ChannelParams params(0.3, 777);

  const TraceSet a = sample_traces(s, params, 500);
  const TraceSet b = sample_traces(s, params, 500);
  REQUIRE(a.count() == b.count());
  for (std::size_t i = 0; i < a.count(); ++i) CHECK(a.traces[i] == b.traces[i]);

  set_worker_threads(1);
  const TraceSet single = sample_traces(s, params, 500);
  set_worker_threads(4);
  const TraceSet quad = sample_traces(s, params, 500);
  set_worker_threads(0);
  for (std::size_t i = 0; i < single.count(); ++i) CHECK(single.traces[i] == quad.traces[i]);

  // per-index streaming matches the batch
  for (std::size_t i = 0; i < 20; ++i) CHECK(sample_one_trace(s, params, i) == a.traces[i]);
}

TEST_CASE("channel params validate p") {
  CHECK_THROWS_AS(ChannelParams(1.0, 0), InvalidP);
  CHECK_THROWS_AS(ChannelParams(-0.1, 0), InvalidP);
  const ChannelParams params(0.25, 0);
  CHECK(params.q() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("kernel values") {
  for (double p : {0.0, 0.1, 0.5, 0.9}) CHECK(kernel(1, 1, p) == 1.0);
  CHECK(kernel(1, 2, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(kernel(3, 2, 0.7) == 0.0);

  // p = 0 degenerates to the identity kernel
  for (std::size_t i = 1; i <= 6; ++i) {
    for (std::size_t j = 1; j <= 6; ++j) {
      CHECK(kernel(i, j, 0.0) == (i == j ? 1.0 : 0.0));
    }
  }

  // each column is a full binomial pmf over landing positions
  for (double p : {0.05, 0.3, 0.45}) {
    for (std::size_t j : {1u, 2u, 7u, 40u}) {
      double sum = 0.0;
      for (std::size_t i = 1; i <= j; ++i) sum += kernel(i, j, p);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("kernel matrix shape and structure") {
  const Matrix f = kernel_matrix(12, 3, 0.25);
  REQUIRE(f.rows() == 10);
  REQUIRE(f.cols() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(f.at(i, i) == doctest::Approx(std::pow(0.75, static_cast<double>(i))).epsilon(1e-12));
    for (std::size_t j = 0; j < i; ++j) CHECK(f.at(i, j) == 0.0);
  }

  const Matrix identity = kernel_matrix(8, 2, 0.0);
  for (std::size_t i = 0; i < identity.rows(); ++i) {
    for (std::size_t j = 0; j < identity.cols(); ++j) {
      CHECK(identity.at(i, j) == (i == j ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("density map is the kernel transform of the indicator vectors") {
  SplitMix64 rng(21);
  for (int rep = 0; rep < 4; ++rep) {
    const std::size_t n = 20 + (rng.next() % 21);  // up to 40
    const std::size_t k = 3;
    const double p = 0.3;
    const BitString s = random_bits(rng, n);
    const DensityMap map = exact_density_map(s, k, p);
    const Matrix f = kernel_matrix(n, k, p);

    for (std::uint64_t code = 0; code < map.kmer_count(); ++code) {
      std::vector<double> indicator(map.positions(), 0.0);
      for (std::size_t j = 0; j + k <= n; ++j) {
        if (s.code_at(j, k) == code) indicator[j] = 1.0;
      }
      const std::vector<double> transformed = f.multiply(indicator);
      for (std::size_t i = 1; i <= map.positions(); ++i) {
        CHECK(map.at(code, i) == doctest::Approx(transformed[i - 1]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("traces file round-trips bit-exactly") {
  SplitMix64 rng(33);
  const BitString s = random_bits(rng, 30);
  const TraceSet ts = sample_traces(s, ChannelParams(0.6, 2024), 25);  // some empty traces

  std::ostringstream out;
  write_traces(out, ts, {"tool=test"});
  const std::string text = out.str();
  CHECK(text.rfind("# n=30 p=0.6 seed=2024 T=25\n", 0) == 0);

  std::istringstream in(text);
  const TraceSet back = read_traces(in);
  CHECK(back.source_length == ts.source_length);
  CHECK(back.params.p == ts.params.p);
  CHECK(back.params.seed == ts.params.seed);
  REQUIRE(back.count() == ts.count());
  for (std::size_t i = 0; i < ts.count(); ++i) CHECK(back.traces[i] == ts.traces[i]);

  std::ostringstream out2;
  write_traces(out2, back, {"tool=test"});
  CHECK(out2.str() == text);
}

TEST_CASE("traces file rejects malformed input") {
  std::istringstream missing_header("0101\n");
  CHECK_THROWS_AS(read_traces(missing_header), IoError);

  std::istringstream short_file("# n=4 p=0.1 seed=1 T=3\n0101\n");
  CHECK_THROWS_AS(read_traces(short_file), IoError);

  std::istringstream bad_bits("# n=4 p=0.1 seed=1 T=1\n01a1\n");
  CHECK_THROWS_AS(read_traces(bad_bits), IoError);
}
