#include "densitrace/channel.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "densitrace/format.hpp"
#include "densitrace/parallel.hpp"
#include "densitrace/rng.hpp"

namespace densitrace {

ChannelParams::ChannelParams(double p_, std::uint64_t seed_) : p(p_), seed(seed_) {
  if (!(p >= 0.0) || p >= 1.0) {
    throw InvalidP("deletion probability must lie in [0, 1)");
  }
}

void sample_one_trace_into(const BitString& s, const ChannelParams& params, std::uint64_t index,
                           BitString& out) {
  SplitMix64 rng(substream_seed(params.seed, index));
  // delete bit when the draw falls below p * 2^64
  const double scaled = params.p * 18446744073709551616.0;  // 2^64
  const std::uint64_t threshold =
      scaled >= 18446744073709551615.0 ? ~std::uint64_t{0} : static_cast<std::uint64_t>(scaled);
  const std::size_t n = s.size();
  if (n >= 1 && n <= 64) {
    const std::uint64_t src = s.words()[0];
    std::uint64_t packed = 0;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.next() >= threshold) {
        packed |= ((src >> i) & 1u) << kept;
        ++kept;
      }
    }
    out.assign_packed(packed, kept);
    return;
  }
  out.clear();
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.next() >= threshold) out.push_back(s.bit(i));
  }
}

BitString sample_one_trace(const BitString& s, const ChannelParams& params, std::uint64_t index) {
  BitString trace;
  sample_one_trace_into(s, params, index, trace);
  return trace;
}

TraceSet sample_traces(const BitString& s, const ChannelParams& params, std::size_t count) {
  ChannelParams checked(params.p, params.seed);  // re-validate
  TraceSet out;
  out.source_length = s.size();
  out.params = checked;
  out.traces.resize(count);
  parallel_for_index(count, [&](std::size_t t) {
    out.traces[t] = sample_one_trace(s, checked, t);
  });
  return out;
}

double kernel(std::size_t i, std::size_t j, double p) {
  if (i < 1 || j < 1) throw OutOfRange("kernel positions are 1-based");
  if (i > j) return 0.0;
  if (i == j) {
    return std::pow(1.0 - p, static_cast<double>(i - 1));
  }
  if (p == 0.0) return 0.0;  // j > i needs deletions
  const double dj = static_cast<double>(j);
  const double di = static_cast<double>(i);
  const double log_binom = std::lgamma(dj) - std::lgamma(di) - std::lgamma(dj - di + 1.0);
  return std::exp(log_binom + (di - 1.0) * std::log1p(-p) +
                  (dj - di) * std::log(p));
}

Matrix kernel_matrix(std::size_t n, std::size_t k, double p) {
  if (k < 2) throw KTooSmall("kernel_matrix requires k >= 2");
  if (k > n) throw OutOfRange("kernel_matrix requires k <= n");
  const std::size_t m = n - k + 1;
  Matrix f(m, m);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = i; j <= m; ++j) {
      f.at(i - 1, j - 1) = kernel(i, j, p);
    }
  }
  return f;
}

void write_traces(std::ostream& out, const TraceSet& traces,
                  const std::vector<std::string>& extra_header) {
  out << "# n=" << traces.source_length << " p=" << format_double(traces.params.p)
      << " seed=" << traces.params.seed << " T=" << traces.count() << '\n';
  for (const auto& line : extra_header) out << "# " << line << '\n';
  for (const auto& trace : traces.traces) out << trace.str() << '\n';
}

TraceSet read_traces(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#') {
    throw IoError("traces file: missing '#' header line");
  }

  TraceSet out;
  bool have_n = false, have_p = false, have_seed = false, have_t = false;
  std::size_t expected = 0;
  double p = 0.0;
  std::uint64_t seed = 0;

  auto parse_header = [&](const std::string& text) {
    std::size_t pos = 1;  // skip '#'
    while (pos < text.size()) {
      while (pos < text.size() && text[pos] == ' ') ++pos;
      const std::size_t eq = text.find('=', pos);
      if (eq == std::string::npos) break;
      const std::size_t end = text.find(' ', eq);
      const std::string key = text.substr(pos, eq - pos);
      const std::string value =
          text.substr(eq + 1, (end == std::string::npos ? text.size() : end) - eq - 1);
      if (key == "n") {
        out.source_length = parse_u64(value);
        have_n = true;
      } else if (key == "p") {
        p = parse_double(value);
        have_p = true;
      } else if (key == "seed") {
        seed = parse_u64(value);
        have_seed = true;
      } else if (key == "T") {
        expected = parse_u64(value);
        have_t = true;
      }
      if (end == std::string::npos) break;
      pos = end + 1;
    }
  };

  parse_header(line);
  // further comment lines may carry provenance; skip them
  while (in.peek() == '#') {
    std::getline(in, line);
  }
  if (!(have_n && have_p && have_seed && have_t)) {
    throw IoError("traces file: header must carry n, p, seed and T");
  }
  out.params = ChannelParams(p, seed);

  out.traces.reserve(expected);
  while (out.traces.size() < expected && std::getline(in, line)) {
    BitString trace;
    trace.reserve(line.size());
    for (char c : line) {
      if (c != '0' && c != '1') throw IoError("traces file: invalid bit character");
      trace.push_back(c - '0');
    }
    if (trace.size() > out.source_length) {
      throw IoError("traces file: trace longer than source length");
    }
    out.traces.push_back(std::move(trace));
  }
  if (out.traces.size() != expected) {
    throw IoError("traces file: expected " + std::to_string(expected) + " traces, got " +
                  std::to_string(out.traces.size()));
  }
  return out;
}

}  // namespace densitrace
