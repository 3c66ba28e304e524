#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "densitrace/bitstring.hpp"
#include "densitrace/linalg.hpp"

namespace densitrace {

/// Deletion-channel parameters. p is the per-bit deletion probability,
/// q = p/(1-p) the supersequence weight ratio (always derived, never stored).
struct ChannelParams {
  double p = 0.0;
  std::uint64_t seed = 0;

  ChannelParams() = default;
  ChannelParams(double p_, std::uint64_t seed_);

  double q() const { return p / (1.0 - p); }
};

/// A batch of traces together with the generation metadata needed to
/// regenerate it bit-identically.
struct TraceSet {
  std::vector<BitString> traces;
  std::size_t source_length = 0;
  ChannelParams params;

  std::size_t count() const { return traces.size(); }
};

/// Passes s through the deletion channel `count` times. Trace t is drawn
/// from its own RNG substream keyed by (seed, t), so generation is
/// reproducible and thread-count independent.
TraceSet sample_traces(const BitString& s, const ChannelParams& params, std::size_t count);

/// Single trace for stream processing; identical to sample_traces(...).traces[index].
BitString sample_one_trace(const BitString& s, const ChannelParams& params, std::uint64_t index);

/// Allocation-free variant for hot loops: clears `out` and refills it.
void sample_one_trace_into(const BitString& s, const ChannelParams& params, std::uint64_t index,
                           BitString& out);

/// Smoothing kernel h(i, j): probability that a Binomial(j-1, 1-p) variable
/// equals i-1, i.e. that source position j lands at trace position i when it
/// survives. 1-based in both arguments; zero for i > j. Evaluated in the log
/// domain so the binomial factor cannot overflow.
double kernel(std::size_t i, std::size_t j, double p);

/// The (n-k+1) x (n-k+1) upper-triangular transform F with F[i][j] = h(i, j)
/// (1-based indices mapped to 0-based storage). Maps occurrence indicators to
/// density vectors; invertible since the diagonal (1-p)^(i-1) is positive.
Matrix kernel_matrix(std::size_t n, std::size_t k, double p);

/// Traces file: a `# n=<n> p=<p> seed=<seed> T=<T>` header line, optionally
/// further `#` comment lines, then exactly T traces, one per line (an empty
/// line is an empty trace). Round-trips bit-exactly.
void write_traces(std::ostream& out, const TraceSet& traces,
                  const std::vector<std::string>& extra_header = {});
TraceSet read_traces(std::istream& in);

}  // namespace densitrace
