#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "densitrace/bitstring.hpp"
#include "densitrace/channel.hpp"

namespace densitrace {

/// Occurrence counts of every k-mer in the source (the k-subword deck).
/// `raw` holds the real-valued estimates, `counts` the rounded, 0-clamped
/// integers. Exact decks built by scanning carry the counts directly.
struct Deck {
  std::size_t k = 0;
  std::vector<double> raw;           // indexed by k-mer code
  std::vector<std::int64_t> counts;  // max(0, round(raw))

  static Deck from_counts(std::size_t k, std::vector<std::int64_t> counts);
  static Deck from_raw(std::size_t k, std::vector<double> raw);

  std::size_t kmer_count() const { return std::size_t{1} << k; }
  std::int64_t total() const;

  bool operator==(const Deck& other) const = default;
};

enum class DeckMode { full, truncated };

/// Mean number of (possibly overlapping) occurrences of x per trace.
double estimate_occurrence_mean(const TraceSet& traces, const BitString& x);

/// Deck estimate via the trace scan: every substring of every trace whose
/// endpoints match contributes its signed weighted interior count to the
/// corresponding k-mer. Truncated mode caps observed substrings at length
/// k + floor(d) with d = truncation_depth(k, n, p).
Deck estimate_deck(const TraceSet& traces, std::size_t k, double p, DeckMode mode);

/// Streaming variant; bit-identical to sample_traces + estimate_deck.
Deck estimate_deck_streamed(const BitString& s, const ChannelParams& params,
                            std::size_t trace_count, std::size_t k, DeckMode mode);

/// Length allowance d that keeps the discarded supersequence tail of the
/// deck estimator below 0.1 for p < 0.5:
/// d = e^2/(1/2-p) * (k ln(e^2/(1/2-p)) + ln n). Natural logarithms.
double truncation_depth(std::size_t k, std::size_t n, double p);

/// Occurrences in `t` of the gapped pattern x[1] *^alpha[1] x[2] ...
/// x[k-1] *^alpha[k-1] x[k], where * matches either bit.
std::size_t count_gapped_occurrences(const BitString& t, const BitString& x,
                                     const std::vector<std::size_t>& alpha);

/// Deck entry via the equivalent wildcard-pattern sum: enumerates gap
/// vectors alpha (one gap per adjacent k-mer pair, |alpha| <= dmax), counts
/// gapped-pattern occurrences per trace, and weights each by
/// (-p/(1-p))^|alpha|. Cross-check machinery; the enumeration is guarded at
/// 10^6 gap vectors.
double wildcard_deck_estimate(const TraceSet& traces, const BitString& x, double p,
                              std::size_t dmax);

/// Same wildcard sum evaluated against an occurrence-mean source (e.g. the
/// exact oracle) instead of traces: each gap vector's pattern expectation is
/// the sum of E over the concrete strings matching it.
double wildcard_deck_from_expectations(const std::function<double(const BitString&)>& mean,
                                       std::size_t n, const BitString& x, double p,
                                       std::size_t dmax);

/// Deck entry evaluated by the supersequence expansion over an
/// occurrence-mean source, with observed lengths capped at len_cap.
/// Feeding exact means reproduces the exact deck. Identity-check machinery.
double deck_entry_via_supersequences(const std::function<double(const BitString&)>& mean,
                                     std::size_t n, const BitString& x, double p,
                                     std::size_t len_cap);

/// Deck TSV: optional `#` provenance lines, then `kmer<TAB>raw<TAB>count`
/// rows sorted by k-mer numeric value.
void write_deck_tsv(std::ostream& out, const Deck& deck,
                    const std::vector<std::string>& header = {});
Deck read_deck_tsv(std::istream& in);

}  // namespace densitrace
