#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "densitrace/bitstring.hpp"
#include "densitrace/channel.hpp"

namespace densitrace {

/// Per-k-mer density vectors for a length-n source: one real vector of
/// length n-k+1 per k-mer, addressed by the k-mer's integer code. Exact maps
/// are nonnegative and sum to n-k+1 over all entries; estimated maps may
/// carry negative entries (the estimator's alternating sum) and are never
/// clamped.
class DensityMap {
 public:
  DensityMap() = default;
  DensityMap(std::size_t k, std::size_t n);

  std::size_t k() const { return k_; }
  std::size_t n() const { return n_; }
  std::size_t positions() const { return n_ - k_ + 1; }
  std::size_t kmer_count() const { return std::size_t{1} << k_; }

  /// Entry for k-mer `code` at 1-based position i.
  double at(std::uint64_t code, std::size_t i) const { return values_[index(code, i)]; }
  double& at(std::uint64_t code, std::size_t i) { return values_[index(code, i)]; }

  std::span<const double> row(std::uint64_t code) const {
    return {values_.data() + code * positions(), positions()};
  }

  double total() const;

  std::span<const double> flat() const { return values_; }
  std::span<double> flat() { return values_; }

  bool operator==(const DensityMap& other) const = default;

 private:
  std::size_t index(std::uint64_t code, std::size_t i) const {
    if (code >= kmer_count() || i < 1 || i > positions()) {
      throw OutOfRange("density map entry out of range");
    }
    return code * positions() + (i - 1);
  }

  std::size_t k_ = 0;
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Fraction of traces showing exactly x at 1-based position i (shorter
/// traces count as misses). Throws EmptyTraceSet when there are no traces.
double estimate_position_prob(const TraceSet& traces, const BitString& x, std::size_t i);

/// Coefficient of the supersequence expansion: (-1)^(|y|-|x|+1) times the
/// interior deletion-pattern count of (y, x). Requires |y| > |x| >= 2 and
/// matching endpoints.
BigInt expansion_coefficient(const BitString& x, const BitString& y);

/// Unbiased estimate of the density-map entry for k-mer x at position i,
/// computed by a single scan over the traces: every substring observed at
/// position i whose endpoints match x contributes its signed weighted
/// interior count. Supersequence sets are never enumerated.
double estimate_density_entry(const TraceSet& traces, const BitString& x, std::size_t i,
                              double p);

/// Full density-map estimate; one scan populates all (x, i) entries and
/// equals estimate_density_entry entrywise, bit for bit. Deterministic for
/// any worker count.
DensityMap estimate_density_map(const TraceSet& traces, std::size_t k, double p);

/// Same estimator without materializing the traces: trace t is generated
/// from its (seed, t) substream, scanned, and discarded. Bit-identical to
/// sample_traces + estimate_density_map for the same arguments.
DensityMap estimate_density_map_streamed(const BitString& s, const ChannelParams& params,
                                         std::size_t trace_count, std::size_t k);

/// Evaluates the density entry directly from an expectation source
/// (position-probability lookup) by expanding over enumerated supersequence
/// sets up to length len_cap. Identity-check machinery, not an estimator:
/// feeding exact probabilities must reproduce the exact density map.
double density_entry_via_supersequences(
    const std::function<double(const BitString&, std::size_t)>& position_prob, std::size_t n,
    const BitString& x, std::size_t i, double p);

/// Density CSV: optional `#` provenance lines, a `kmer,i,value` header, one
/// row per entry with the k-mer as bit text, i 1-based, and the value in
/// shortest round-trip form.
void write_density_csv(std::ostream& out, const DensityMap& map,
                       const std::vector<std::string>& header = {});
DensityMap read_density_csv(std::istream& in);

}  // namespace densitrace
