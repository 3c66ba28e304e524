#include "densitrace/density.hpp"

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
  if (k > 20) throw GuardExceeded("k guarded at 20 (2^k vectors get allocated)");
}

/// One signed-weighted DP step: consume interior character c against the
/// interior target g (bits MSB-first in g_code, width k-2). Skips carry
/// weight -q, matches carry weight 1, so the row accumulates
/// binom(f, g) * (-q)^(|f|-|g|) at full target width.
inline void dp_step(double* w, std::size_t width, int c, std::uint64_t g_code, double neg_q) {
  for (std::size_t b = width; b >= 1; --b) {
    const int gb = static_cast<int>((g_code >> (width - b)) & 1u);
    w[b] = neg_q * w[b] + (c == gb ? w[b - 1] : 0.0);
  }
  w[0] *= neg_q;
}

/// Scans one trace into the flat accumulator (2^k rows of n-k+1 positions).
/// For every anchor a and interior target g, the row w tracks the signed
/// weighted count of g inside the growing interior; each end position e
/// contributes w to the k-mer (t[a], g, t[e]) at position a+1.
void scan_trace_density(std::vector<double>& acc, const BitString& t, std::size_t k,
                        std::size_t positions, double neg_q) {
  const std::size_t len = t.size();
  if (len < k) return;
  if (k == 2 && len <= 64) {
    // For 2-mers the signed weighted sum over end positions telescopes into
    // the Horner suffix sums s_b[a] = [t(a)=b] + (-q) s_b[a+1]; the anchor a
    // contribution to k-mer (t(a), b) is s_b[a+1]. One linear pass per trace.
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
      double* row0 = acc.data() + (((bits >> a) & 1u) << 1) * positions + a;
      row0[0] += s0[a + 1];
      row0[positions] += s1[a + 1];
    }
    return;
  }
  const std::size_t width = k - 2;
  const std::uint64_t g_count = std::uint64_t{1} << width;
  double w[24];
  for (std::size_t a = 0; a + k <= len; ++a) {
    const std::uint64_t first = static_cast<std::uint64_t>(t.bit(a)) << (k - 1);
    for (std::uint64_t g = 0; g < g_count; ++g) {
      w[0] = 1.0;
      for (std::size_t b = 1; b <= width; ++b) w[b] = 0.0;
      for (std::size_t pos = a + 1; pos + 1 < a + k; ++pos) {
        dp_step(w, width, t.bit(pos), g, neg_q);
      }
      const std::uint64_t base = first | (g << 1);
      for (std::size_t e = a + k - 1; e < len; ++e) {
        const int last = t.bit(e);
        acc[(base | static_cast<std::uint64_t>(last)) * positions + a] += w[width];
        dp_step(w, width, last, g, neg_q);
      }
    }
  }
}

/// Same walk restricted to one (x, i), accumulating into `acc` emission by
/// emission exactly as the full-map scan does, so results agree bit for bit.
void scan_trace_entry(double& acc, const BitString& t, std::size_t a, int first_bit,
                      int last_bit, std::uint64_t g_code, std::size_t k, double neg_q) {
  const std::size_t len = t.size();
  if (len < a + k) return;
  if (k == 2 && len <= 64) {
    const std::uint64_t bits = t.words()[0];
    if (static_cast<int>((bits >> a) & 1u) != first_bit) return;
    double suffix = 0.0;
    for (std::size_t e = len; e-- > a + 1;) {
      const int bit = static_cast<int>((bits >> e) & 1u);
      suffix = (bit == last_bit ? 1.0 : 0.0) + neg_q * suffix;
    }
    acc += suffix;
    return;
  }
  if (t.bit(a) != first_bit) return;
  const std::size_t width = k - 2;
  double w[24];
  w[0] = 1.0;
  for (std::size_t b = 1; b <= width; ++b) w[b] = 0.0;
  for (std::size_t pos = a + 1; pos + 1 < a + k; ++pos) {
    dp_step(w, width, t.bit(pos), g_code, neg_q);
  }
  for (std::size_t e = a + k - 1; e < len; ++e) {
    const int last = t.bit(e);
    if (last == last_bit) acc += w[width];
    dp_step(w, width, last, g_code, neg_q);
  }
}

struct EstimatorShape {
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t positions = 0;
  double neg_q = 0.0;
  double scale = 0.0;  // 1 / (T (1-p)^k)
};

EstimatorShape estimator_shape(std::size_t k, std::size_t n, double p, std::size_t trace_count,
                               const char* where) {
  require_k(k);
  if (trace_count == 0) throw EmptyTraceSet(std::string(where) + ": no traces");
  if (k > n) throw OutOfRange(std::string(where) + ": k exceeds source length");
  if (!(p >= 0.0) || p >= 1.0) throw InvalidP(std::string(where) + ": p must lie in [0, 1)");
  warn_if_p_geq_half(p, where);
  EstimatorShape shape;
  shape.k = k;
  shape.n = n;
  shape.positions = n - k + 1;
  shape.neg_q = -(p / (1.0 - p));
  shape.scale = 1.0 / (std::pow(1.0 - p, static_cast<double>(k)) *
                       static_cast<double>(trace_count));
  return shape;
}

template <class TraceAt>
DensityMap run_density_scan(const EstimatorShape& shape, std::size_t trace_count,
                            TraceAt trace_at) {
  std::vector<double> zero(shape.positions << shape.k, 0.0);
  auto acc = blocked_reduce(
      trace_count, kTraceBlock, zero,
      [&](std::vector<double>& block_acc, std::size_t begin, std::size_t end) {
        BitString scratch;
        for (std::size_t t = begin; t < end; ++t) {
          scan_trace_density(block_acc, trace_at(t, scratch), shape.k, shape.positions,
                             shape.neg_q);
        }
      },
      [](std::vector<double>& total, const std::vector<double>& part) {
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += part[i];
      });

  DensityMap map(shape.k, shape.n);
  auto out = map.flat();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = acc[i] * shape.scale;
  return map;
}

}  // namespace

DensityMap::DensityMap(std::size_t k, std::size_t n) : k_(k), n_(n) {
  require_k(k);
  if (n < k) throw OutOfRange("density map requires n >= k");
  const std::size_t entries = (n - k + 1) << k;
  if (entries > (std::size_t{1} << 27)) {
    throw GuardExceeded("density map would exceed the allocation guard");
  }
  values_.assign(entries, 0.0);
}

double DensityMap::total() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum;
}

double estimate_position_prob(const TraceSet& traces, const BitString& x, std::size_t i) {
  if (traces.count() == 0) throw EmptyTraceSet("estimate_position_prob: no traces");
  if (i < 1) throw OutOfRange("positions are 1-based");
  const std::size_t a = i - 1;
  std::size_t hits = 0;
  for (const auto& t : traces.traces) {
    if (t.size() < a + x.size()) continue;
    bool match = true;
    for (std::size_t b = 0; b < x.size() && match; ++b) {
      match = t.bit(a + b) == x.bit(b);
    }
    hits += match;
  }
  return static_cast<double>(hits) / static_cast<double>(traces.count());
}

BigInt expansion_coefficient(const BitString& x, const BitString& y) {
  if (x.size() < 2) throw KTooSmall("expansion coefficients require |x| >= 2");
  if (y.size() <= x.size()) throw OutOfRange("expansion coefficients require |y| > |x|");
  if (y.at(1) != x.at(1) || y.at(-1) != x.at(-1)) {
    throw EndpointMismatch("y is not an endpoint-matched supersequence of x");
  }
  const BigInt count = subseq_count(y.interior(), x.interior());
  // (-1)^(|y|-|x|+1)
  return ((y.size() - x.size() + 1) % 2 == 0) ? count : -count;
}

double estimate_density_entry(const TraceSet& traces, const BitString& x, std::size_t i,
                              double p) {
  const auto shape =
      estimator_shape(x.size(), traces.source_length, p, traces.count(), "estimate_density_entry");
  if (i < 1 || i > shape.positions) throw OutOfRange("position out of range");
  const std::size_t a = i - 1;
  const int first_bit = x.at(1);
  const int last_bit = x.at(-1);
  const std::uint64_t g_code = x.size() == 2 ? 0 : x.interior().code();

  const double acc = blocked_reduce(
      traces.count(), kTraceBlock, 0.0,
      [&](double& sum, std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
          scan_trace_entry(sum, traces.traces[t], a, first_bit, last_bit, g_code, shape.k,
                           shape.neg_q);
        }
      },
      [](double& total, const double& part) { total += part; });
  return acc * shape.scale;
}

DensityMap estimate_density_map(const TraceSet& traces, std::size_t k, double p) {
  const auto shape =
      estimator_shape(k, traces.source_length, p, traces.count(), "estimate_density_map");
  return run_density_scan(shape, traces.count(),
                          [&](std::size_t t, BitString&) -> const BitString& {
                            return traces.traces[t];
                          });
}

DensityMap estimate_density_map_streamed(const BitString& s, const ChannelParams& params,
                                         std::size_t trace_count, std::size_t k) {
  const auto shape =
      estimator_shape(k, s.size(), params.p, trace_count, "estimate_density_map_streamed");
  return run_density_scan(shape, trace_count,
                          [&](std::size_t t, BitString& scratch) -> const BitString& {
                            sample_one_trace_into(s, params, t, scratch);
                            return scratch;
                          });
}

double density_entry_via_supersequences(
    const std::function<double(const BitString&, std::size_t)>& position_prob, std::size_t n,
    const BitString& x, std::size_t i, double p) {
  const std::size_t k = x.size();
  require_k(k);
  if (!(p >= 0.0) || p >= 1.0) throw InvalidP("p must lie in [0, 1)");
  const double q = p / (1.0 - p);
  double acc = position_prob(x, i);
  for (std::size_t len = k + 1; len <= n; ++len) {
    const double sign = ((len - k) % 2 == 1) ? 1.0 : -1.0;  // (-1)^(len-k+1)
    for (const auto& y : enumerate_supersequences(x, len)) {
      const double prob = position_prob(y, i);
      if (prob == 0.0) continue;
      acc -= sign * prob * weighted_interior_count(y, x, q);
    }
  }
  return acc / std::pow(1.0 - p, static_cast<double>(k));
}

void write_density_csv(std::ostream& out, const DensityMap& map,
                       const std::vector<std::string>& header) {
  for (const auto& line : header) out << "# " << line << '\n';
  out << "kmer,i,value\n";
  for (std::uint64_t code = 0; code < map.kmer_count(); ++code) {
    const std::string kmer = BitString::from_code(code, map.k()).str();
    for (std::size_t i = 1; i <= map.positions(); ++i) {
      out << kmer << ',' << i << ',' << format_double(map.at(code, i)) << '\n';
    }
  }
}

DensityMap read_density_csv(std::istream& in) {
  std::string line;
  std::size_t k = 0;
  std::size_t max_i = 0;
  struct Row {
    std::uint64_t code;
    std::size_t i;
    double value;
  };
  std::vector<Row> rows;
  bool saw_columns = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!saw_columns) {
      if (line != "kmer,i,value") throw IoError("density csv: missing kmer,i,value header");
      saw_columns = true;
      continue;
    }
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw IoError("density csv: malformed row");
    }
    const BitString kmer = BitString::parse(line.substr(0, c1));
    if (k == 0) {
      k = kmer.size();
    } else if (kmer.size() != k) {
      throw IoError("density csv: inconsistent k-mer width");
    }
    Row row;
    row.code = kmer.code();
    row.i = parse_u64(line.substr(c1 + 1, c2 - c1 - 1));
    row.value = parse_double(line.substr(c2 + 1));
    max_i = std::max(max_i, row.i);
    rows.push_back(row);
  }
  if (k == 0 || max_i == 0) throw IoError("density csv: no data rows");
  DensityMap map(k, k - 1 + max_i);
  for (const auto& row : rows) map.at(row.code, row.i) = row.value;
  return map;
}

}  // namespace densitrace
