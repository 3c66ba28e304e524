#include "densitrace/deck.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "densitrace/format.hpp"
#include "densitrace/parallel.hpp"
#include "densitrace/warnings.hpp"

namespace densitrace {

namespace {

constexpr std::size_t kTraceBlock = 8192;

void require_k(std::size_t k) {
  if (k < 2) throw KTooSmall("k-mers must have length >= 2");
  if (k > 20) throw GuardExceeded("k guarded at 20");
}

inline void dp_step(double* w, std::size_t width, int c, std::uint64_t g_code, double neg_q) {
  for (std::size_t b = width; b >= 1; --b) {
    const int gb = static_cast<int>((g_code >> (width - b)) & 1u);
    w[b] = neg_q * w[b] + (c == gb ? w[b - 1] : 0.0);
  }
  w[0] *= neg_q;
}

/// Deck analogue of the density scan: substrings at every anchor contribute
/// to their k-mer's accumulator, without the position split. `max_len` caps
/// the observed substring length (truncated mode); pass n for the full sum.
void scan_trace_deck(std::vector<double>& acc, const BitString& t, std::size_t k,
                     std::size_t max_len, double neg_q) {
  const std::size_t len = t.size();
  if (len < k) return;
  if (k == 2 && len <= 64 && max_len >= len) {
    // untruncated 2-mer case: Horner suffix sums, one linear pass (see the
    // density scan for the identity)
    const std::uint64_t bits = t.words()[0];
    double s0[65], s1[65];
    s0[len] = 0.0;
    s1[len] = 0.0;
    for (std::size_t a = len; a-- > 0;) {
      const bool one = (bits >> a) & 1u;
      s0[a] = (one ? 0.0 : 1.0) + neg_q * s0[a + 1];
      s1[a] = (one ? 1.0 : 0.0) + neg_q * s1[a + 1];
    }
    for (std::size_t a = 0; a + 2 <= len; ++a) {
      double* row = acc.data() + (((bits >> a) & 1u) << 1);
      row[0] += s0[a + 1];
      row[1] += s1[a + 1];
    }
    return;
  }
  const std::size_t width = k - 2;
  const std::uint64_t g_count = std::uint64_t{1} << width;
  double w[24];
  for (std::size_t a = 0; a + k <= len; ++a) {
    const std::uint64_t first = static_cast<std::uint64_t>(t.bit(a)) << (k - 1);
    const std::size_t stop = std::min(len, a + max_len);  // e < stop
    for (std::uint64_t g = 0; g < g_count; ++g) {
      w[0] = 1.0;
      for (std::size_t b = 1; b <= width; ++b) w[b] = 0.0;
      for (std::size_t pos = a + 1; pos + 1 < a + k; ++pos) {
        dp_step(w, width, t.bit(pos), g, neg_q);
      }
      const std::uint64_t base = first | (g << 1);
      for (std::size_t e = a + k - 1; e < stop; ++e) {
        const int last = t.bit(e);
        acc[base | static_cast<std::uint64_t>(last)] += w[width];
        dp_step(w, width, last, g, neg_q);
      }
    }
  }
}

template <class TraceAt>
Deck run_deck_scan(std::size_t k, double p, std::size_t trace_count, std::size_t max_len,
                   TraceAt trace_at) {
  const double neg_q = -(p / (1.0 - p));
  const double scale =
      1.0 / (std::pow(1.0 - p, static_cast<double>(k)) * static_cast<double>(trace_count));
  std::vector<double> zero(std::size_t{1} << k, 0.0);
  auto acc = blocked_reduce(
      trace_count, kTraceBlock, zero,
      [&](std::vector<double>& block_acc, std::size_t begin, std::size_t end) {
        BitString scratch;
        for (std::size_t t = begin; t < end; ++t) {
          scan_trace_deck(block_acc, trace_at(t, scratch), k, max_len, neg_q);
        }
      },
      [](std::vector<double>& total, const std::vector<double>& part) {
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += part[i];
      });
  for (double& v : acc) v *= scale;
  return Deck::from_raw(k, std::move(acc));
}

std::size_t resolve_max_len(std::size_t k, std::size_t n, double p, DeckMode mode) {
  if (mode == DeckMode::full) return n;
  const double d = truncation_depth(k, n, p);
  const double capped = static_cast<double>(k) + std::floor(d);
  if (capped >= static_cast<double>(n)) return n;
  return static_cast<std::size_t>(capped);
}

void check_estimator_args(std::size_t k, std::size_t n, double p, std::size_t trace_count,
                          const char* where) {
  require_k(k);
  if (trace_count == 0) throw EmptyTraceSet(std::string(where) + ": no traces");
  if (k > n) throw OutOfRange(std::string(where) + ": k exceeds source length");
  if (!(p >= 0.0) || p >= 1.0) throw InvalidP(std::string(where) + ": p must lie in [0, 1)");
  warn_if_p_geq_half(p, where);
}

/// Gap vectors alpha in Z_{>=0}^(k-1) with |alpha| <= dmax, lexicographic.
void enumerate_gap_vectors(std::size_t gaps, std::size_t dmax,
                           const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> alpha(gaps, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t budget) {
    if (pos == gaps) {
      visit(alpha);
      return;
    }
    for (std::size_t v = 0; v <= budget; ++v) {
      alpha[pos] = v;
      rec(pos + 1, budget - v);
    }
    alpha[pos] = 0;
  };
  rec(0, dmax);
}

std::uint64_t gap_vector_count(std::size_t gaps, std::size_t dmax) {
  // C(dmax + gaps, gaps), saturating
  long double count = 1.0L;
  for (std::size_t i = 1; i <= gaps; ++i) {
    count *= static_cast<long double>(dmax + i) / static_cast<long double>(i);
    if (count > 1e18L) return ~std::uint64_t{0};
  }
  return static_cast<std::uint64_t>(count);
}

}  // namespace

std::size_t count_gapped_occurrences(const BitString& t, const BitString& x,
                                     const std::vector<std::size_t>& alpha) {
  std::size_t span = x.size();
  for (std::size_t a : alpha) span += a;
  if (t.size() < span) return 0;
  std::size_t hits = 0;
  for (std::size_t start = 0; start + span <= t.size(); ++start) {
    std::size_t pos = start;
    bool match = true;
    for (std::size_t b = 0; b < x.size() && match; ++b) {
      match = t.bit(pos) == x.bit(b);
      pos += 1 + (b < alpha.size() ? alpha[b] : 0);
    }
    hits += match;
  }
  return hits;
}

Deck Deck::from_counts(std::size_t k, std::vector<std::int64_t> counts) {
  require_k(k);
  if (counts.size() != (std::size_t{1} << k)) throw ShapeMismatch("deck size mismatch");
  Deck deck;
  deck.k = k;
  deck.raw.assign(counts.begin(), counts.end());
  deck.counts = std::move(counts);
  return deck;
}

Deck Deck::from_raw(std::size_t k, std::vector<double> raw) {
  require_k(k);
  if (raw.size() != (std::size_t{1} << k)) throw ShapeMismatch("deck size mismatch");
  Deck deck;
  deck.k = k;
  deck.counts.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const long long rounded = std::llround(raw[i]);
    deck.counts[i] = rounded < 0 ? 0 : rounded;
  }
  deck.raw = std::move(raw);
  return deck;
}

std::int64_t Deck::total() const {
  std::int64_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

double estimate_occurrence_mean(const TraceSet& traces, const BitString& x) {
  if (traces.count() == 0) throw EmptyTraceSet("estimate_occurrence_mean: no traces");
  std::size_t hits = 0;
  for (const auto& t : traces.traces) {
    if (t.size() < x.size()) continue;
    for (std::size_t a = 0; a + x.size() <= t.size(); ++a) {
      bool match = true;
      for (std::size_t b = 0; b < x.size() && match; ++b) {
        match = t.bit(a + b) == x.bit(b);
      }
      hits += match;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(traces.count());
}

Deck estimate_deck(const TraceSet& traces, std::size_t k, double p, DeckMode mode) {
  check_estimator_args(k, traces.source_length, p, traces.count(), "estimate_deck");
  const std::size_t max_len = resolve_max_len(k, traces.source_length, p, mode);
  return run_deck_scan(k, p, traces.count(), max_len,
                       [&](std::size_t t, BitString&) -> const BitString& {
                         return traces.traces[t];
                       });
}

Deck estimate_deck_streamed(const BitString& s, const ChannelParams& params,
                            std::size_t trace_count, std::size_t k, DeckMode mode) {
  check_estimator_args(k, s.size(), params.p, trace_count, "estimate_deck_streamed");
  const std::size_t max_len = resolve_max_len(k, s.size(), params.p, mode);
  return run_deck_scan(k, params.p, trace_count, max_len,
                       [&](std::size_t t, BitString& scratch) -> const BitString& {
                         sample_one_trace_into(s, params, t, scratch);
                         return scratch;
                       });
}

double truncation_depth(std::size_t k, std::size_t n, double p) {
  if (!(p >= 0.0) || p >= 0.5) throw InvalidP("truncation depth requires p < 0.5");
  if (n < 2) throw OutOfRange("truncation depth requires n >= 2");
  const double base = std::exp(2.0) / (0.5 - p);
  return base * (static_cast<double>(k) * std::log(base) + std::log(static_cast<double>(n)));
}

double wildcard_deck_estimate(const TraceSet& traces, const BitString& x, double p,
                              std::size_t dmax) {
  const std::size_t k = x.size();
  check_estimator_args(k, traces.source_length, p, traces.count(), "wildcard_deck_estimate");
  if (gap_vector_count(k - 1, dmax) > 1000000) {
    throw GuardExceeded("wildcard enumeration guarded at 10^6 gap vectors");
  }
  const double neg_q = -(p / (1.0 - p));
  double acc = 0.0;
  enumerate_gap_vectors(k - 1, dmax, [&](const std::vector<std::size_t>& alpha) {
    std::size_t total_gap = 0;
    for (std::size_t a : alpha) total_gap += a;
    std::size_t hits = 0;
    for (const auto& t : traces.traces) hits += count_gapped_occurrences(t, x, alpha);
    const double mean = static_cast<double>(hits) / static_cast<double>(traces.count());
    acc += mean * std::pow(neg_q, static_cast<double>(total_gap));
  });
  return acc / std::pow(1.0 - p, static_cast<double>(k));
}

double wildcard_deck_from_expectations(const std::function<double(const BitString&)>& mean,
                                       std::size_t n, const BitString& x, double p,
                                       std::size_t dmax) {
  const std::size_t k = x.size();
  require_k(k);
  if (!(p >= 0.0) || p >= 1.0) throw InvalidP("p must lie in [0, 1)");
  if (gap_vector_count(k - 1, dmax) > 1000000) {
    throw GuardExceeded("wildcard enumeration guarded at 10^6 gap vectors");
  }
  const double neg_q = -(p / (1.0 - p));
  double acc = 0.0;
  enumerate_gap_vectors(k - 1, dmax, [&](const std::vector<std::size_t>& alpha) {
    std::size_t total_gap = 0;
    for (std::size_t a : alpha) total_gap += a;
    if (k + total_gap > n) return;  // pattern cannot fit in any trace
    if (total_gap > 26) {
      throw GuardExceeded("wildcard expectation expansion guarded at 2^26 fills");
    }
    // expectation of the gapped pattern = sum of E over matching strings
    double pattern_mean = 0.0;
    const std::size_t free_bits = total_gap;
    for (std::uint64_t fill = 0; fill < (std::uint64_t{1} << free_bits); ++fill) {
      BitString w;
      w.reserve(k + total_gap);
      std::size_t used = 0;
      for (std::size_t b = 0; b < k; ++b) {
        w.push_back(x.bit(b));
        if (b + 1 < k) {
          for (std::size_t g = 0; g < alpha[b]; ++g) {
            w.push_back(static_cast<int>((fill >> (free_bits - 1 - used)) & 1u));
            ++used;
          }
        }
      }
      pattern_mean += mean(w);
    }
    acc += pattern_mean * std::pow(neg_q, static_cast<double>(total_gap));
  });
  return acc / std::pow(1.0 - p, static_cast<double>(k));
}

double deck_entry_via_supersequences(const std::function<double(const BitString&)>& mean,
                                     std::size_t n, const BitString& x, double p,
                                     std::size_t len_cap) {
  const std::size_t k = x.size();
  require_k(k);
  if (!(p >= 0.0) || p >= 1.0) throw InvalidP("p must lie in [0, 1)");
  const double q = p / (1.0 - p);
  double acc = mean(x);
  const std::size_t top = std::min(n, len_cap);
  for (std::size_t len = k + 1; len <= top; ++len) {
    const double sign = ((len - k) % 2 == 1) ? 1.0 : -1.0;  // (-1)^(len-k+1)
    for (const auto& y : enumerate_supersequences(x, len)) {
      const double e = mean(y);
      if (e == 0.0) continue;
      acc -= sign * e * weighted_interior_count(y, x, q);
    }
  }
  return acc / std::pow(1.0 - p, static_cast<double>(k));
}

void write_deck_tsv(std::ostream& out, const Deck& deck,
                    const std::vector<std::string>& header) {
  for (const auto& line : header) out << "# " << line << '\n';
  for (std::uint64_t code = 0; code < deck.kmer_count(); ++code) {
    out << BitString::from_code(code, deck.k).str() << '\t' << format_double(deck.raw[code])
        << '\t' << deck.counts[code] << '\n';
  }
}

Deck read_deck_tsv(std::istream& in) {
  std::string line;
  std::size_t k = 0;
  std::vector<double> raw;
  std::vector<std::int64_t> counts;
  std::vector<std::uint64_t> codes;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) {
      throw IoError("deck tsv: malformed row");
    }
    const BitString kmer = BitString::parse(line.substr(0, t1));
    if (k == 0) {
      k = kmer.size();
    } else if (kmer.size() != k) {
      throw IoError("deck tsv: inconsistent k-mer width");
    }
    codes.push_back(kmer.code());
    raw.push_back(parse_double(line.substr(t1 + 1, t2 - t1 - 1)));
    counts.push_back(static_cast<std::int64_t>(parse_double(line.substr(t2 + 1))));
  }
  if (k == 0) throw IoError("deck tsv: no rows");
  Deck deck;
  deck.k = k;
  deck.raw.assign(std::size_t{1} << k, 0.0);
  deck.counts.assign(std::size_t{1} << k, 0);
  for (std::size_t r = 0; r < codes.size(); ++r) {
    if (codes[r] >= deck.raw.size()) throw IoError("deck tsv: k-mer code out of range");
    deck.raw[codes[r]] = raw[r];
    deck.counts[codes[r]] = counts[r];
  }
  return deck;
}

}  // namespace densitrace
