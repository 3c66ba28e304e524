#include "verify_suites.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "densitrace/analysis.hpp"
#include "densitrace/bitstring.hpp"
#include "densitrace/deck.hpp"
#include "densitrace/density.hpp"
#include "densitrace/exact_oracle.hpp"
#include "densitrace/format.hpp"
#include "densitrace/rng.hpp"

namespace densitrace::verify {

namespace {

BitString random_bits(SplitMix64& rng, std::size_t length) {
  BitString s;
  s.reserve(length);
  for (std::size_t i = 0; i < length; ++i) s.push_back(static_cast<int>(rng.next() & 1u));
  return s;
}

std::vector<BitString> all_strings(std::size_t length) {
  std::vector<BitString> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << length); ++code) {
    out.push_back(BitString::from_code(code, length));
  }
  return out;
}

/// Expansion coefficient by the defining recursion (subtracting every
/// shorter intermediate's contribution) rather than the closed form.
BigInt coefficient_by_recursion(const BitString& x, const BitString& y,
                                std::map<std::pair<std::size_t, std::uint64_t>, BigInt>& memo) {
  const auto key = std::make_pair(y.size(), y.code());
  if (const auto it = memo.find(key); it != memo.end()) return it->second;
  BigInt value = subseq_count(y.interior(), x.interior());
  for (std::size_t j = x.size() + 1; j < y.size(); ++j) {
    for (const auto& z : enumerate_supersequences(x, j)) {
      const BigInt inner = subseq_count(y.interior(), z.interior());
      if (inner == 0) continue;
      value -= coefficient_by_recursion(x, z, memo) * inner;
    }
  }
  memo[key] = value;
  return value;
}

bool suite_lemma1(const SuiteOptions& opt, std::ostream& out) {
  const std::size_t n = std::min<std::size_t>(opt.n, 14);
  SplitMix64 rng(opt.seed);
  double worst = 0.0;
  for (std::size_t inst = 0; inst < opt.instances; ++inst) {
    const BitString s = random_bits(rng, n);
    for (std::size_t k : {std::size_t{2}, std::size_t{3}}) {
      const ExactStats stats = exact_statistics(s, opt.p, k);
      const DensityMap exact = exact_density_map(s, k, opt.p);
      auto prob = [&](const BitString& y, std::size_t i) { return stats.position_prob(y, i); };
      double err = 0.0;
      for (const auto& x : all_strings(k)) {
        for (std::size_t i = 1; i <= exact.positions(); ++i) {
          const double got = density_entry_via_supersequences(prob, n, x, i, opt.p);
          err = std::max(err, std::fabs(got - exact.at(x.code(), i)));
        }
      }
      out << "case s=" << s.str() << " k=" << k << " max_err=" << format_double(err) << '\n';
      worst = std::max(worst, err);
    }
  }
  out << "max error " << format_double(worst) << " (tolerance 1e-09)\n";
  return worst <= 1e-9;
}

bool suite_lemma2(const SuiteOptions&, std::ostream& out) {
  bool ok = true;
  for (std::size_t flen = 1; flen <= 6; ++flen) {
    std::size_t checked = 0;
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
          ok = ok && (sum == (f == g ? 1 : 0));
          ++checked;
        }
      }
    }
    out << "case |f|=" << flen << " pairs=" << checked << " max_err=0\n";
  }
  out << (ok ? "identity holds for all pairs up to |f| = 6\n" : "identity FAILED\n");
  return ok;
}

bool suite_deck_identity(const SuiteOptions& opt, std::ostream& out) {
  const std::size_t n = std::min<std::size_t>(opt.n, 12);
  SplitMix64 rng(opt.seed);
  double worst_wildcard = 0.0;
  bool rounding_ok = true;
  for (std::size_t inst = 0; inst < opt.instances; ++inst) {
    const BitString s = random_bits(rng, n);
    for (std::size_t k : {std::size_t{2}, std::size_t{3}}) {
      const ExactStats stats = exact_statistics(s, opt.p, k);
      const Deck exact = exact_deck(s, k);
      auto mean = [&](const BitString& y) { return stats.occurrence_mean(y); };
      double err = 0.0;
      for (const auto& x : all_strings(k)) {
        const double raw = deck_entry_via_supersequences(mean, n, x, opt.p, n);
        const double wild = wildcard_deck_from_expectations(mean, n, x, opt.p, n - k);
        err = std::max(err, std::fabs(wild - raw));
        const long long rounded = std::llround(raw);
        rounding_ok = rounding_ok && rounded == exact.counts[x.code()];
      }
      out << "case s=" << s.str() << " k=" << k << " wildcard_gap=" << format_double(err)
          << (rounding_ok ? " rounds=ok" : " rounds=FAIL") << '\n';
      worst_wildcard = std::max(worst_wildcard, err);
    }
  }
  out << "max wildcard gap " << format_double(worst_wildcard) << " (tolerance 1e-09)\n";
  return rounding_ok && worst_wildcard <= 1e-9;
}

bool suite_truncation(const SuiteOptions& opt, std::ostream& out) {
  SplitMix64 rng(opt.seed);
  double worst = 0.0;
  for (double p : {0.1, 0.3, 0.45}) {
    for (std::size_t n : {std::size_t{10}, std::size_t{14}}) {
      const BitString s = random_bits(rng, n);
      for (std::size_t k : {std::size_t{2}, std::size_t{3}}) {
        const ExactStats stats = exact_statistics(s, p, k);
        auto mean = [&](const BitString& y) { return stats.occurrence_mean(y); };
        const double d = truncation_depth(k, n, p);
        const std::size_t cap =
            std::min<double>(static_cast<double>(n), static_cast<double>(k) + std::floor(d));
        double err = 0.0;
        for (const auto& x : all_strings(k)) {
          const double full = deck_entry_via_supersequences(mean, n, x, p, n);
          const double truncated = deck_entry_via_supersequences(mean, n, x, p, cap);
          err = std::max(err, std::fabs(full - truncated));
        }
        out << "case n=" << n << " k=" << k << " p=" << format_double(p)
            << " d=" << format_double(d) << " gap=" << format_double(err) << '\n';
        worst = std::max(worst, err);
      }
    }
  }
  out << "max truncation gap " << format_double(worst) << " (bound 0.1)\n";
  return worst <= 0.1;
}

bool suite_coefficients(const SuiteOptions&, std::ostream& out) {
  bool ok = true;
  std::size_t checked = 0;
  for (const auto& x : all_strings(3)) {
    std::map<std::pair<std::size_t, std::uint64_t>, BigInt> memo;
    for (std::size_t len = 4; len <= 6; ++len) {
      for (const auto& y : enumerate_supersequences(x, len)) {
        const BigInt closed = expansion_coefficient(x, y);
        const BigInt recursive = coefficient_by_recursion(x, y, memo);
        ok = ok && closed == recursive;
        ++checked;
      }
    }
  }
  out << "checked " << checked << " (x, y) pairs, closed form "
      << (ok ? "matches" : "DIFFERS from") << " the recursion\n";
  return ok;
}

bool suite_bounds(const SuiteOptions&, std::ostream& out) {
  bool ok = true;
  for (double c : {0.5, 1.0, 2.0}) {
    const double beta0 = bound_functions(c, 1e-6, 1000).beta;
    out << "case c=" << format_double(c) << " beta(1e-6)=" << format_double(beta0) << '\n';
    ok = ok && std::fabs(beta0 - 3.0) < 0.01;
  }
  for (double c : {0.5, 1.0, 2.0}) {
    double prev_beta = -1.0;
    for (int idx = 0; idx < 99; ++idx) {
      const double p = 0.005 + idx * (0.495 - 0.005) / 98.0;
      const BoundsReport r = bound_functions(c, p, 1000);
      ok = ok && r.beta > prev_beta;
      ok = ok && r.new_exponent < r.prior_exponent;
      prev_beta = r.beta;
    }
  }
  for (int idx = 0; idx < 99; ++idx) {
    const double p = 0.005 + idx * (0.495 - 0.005) / 98.0;
    ok = ok && bound_functions(1.0, p, 1000).beta > bound_functions(0.5, p, 1000).beta;
    ok = ok && bound_functions(2.0, p, 1000).beta > bound_functions(1.0, p, 1000).beta;
  }
  out << (ok ? "grid checks pass\n" : "grid checks FAILED\n");
  return ok;
}

bool suite_distinguish(const SuiteOptions& opt, std::ostream& out) {
  const BitString first = BitString::parse("000000111000000000000");   // 0^6 1^3 0^12
  const BitString second = BitString::parse("000000000000111000000");  // 0^12 1^3 0^6
  const std::vector<BitString> candidates{first, second};
  std::size_t correct = 0;
  SplitMix64 rng(opt.seed);
  for (std::size_t trial = 0; trial < opt.trials; ++trial) {
    const std::size_t truth = trial % 2;
    const ChannelParams params(0.2, rng.next());
    const TraceSet traces = sample_traces(candidates[truth], params, opt.traces);
    correct += distinguish(traces, candidates, 3, 0.2) == truth;
  }
  out << "correct " << correct << "/" << opt.trials << '\n';
  const std::size_t needed =
      static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(opt.trials)));
  return correct >= needed;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"lemma1", "lemma2", "deck-identity", "truncation",
          "coefficients", "bounds", "distinguish"};
}

bool known_suite(const std::string& name) {
  const auto names = suite_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

bool suite_needs_seed(const std::string& name) {
  return name == "lemma1" || name == "deck-identity" || name == "truncation" ||
         name == "distinguish";
}

bool run_suite(const std::string& name, const SuiteOptions& options, std::ostream& out) {
  bool ok = false;
  if (name == "lemma1") {
    ok = suite_lemma1(options, out);
  } else if (name == "lemma2") {
    ok = suite_lemma2(options, out);
  } else if (name == "deck-identity") {
    ok = suite_deck_identity(options, out);
  } else if (name == "truncation") {
    ok = suite_truncation(options, out);
  } else if (name == "coefficients") {
    ok = suite_coefficients(options, out);
  } else if (name == "bounds") {
    ok = suite_bounds(options, out);
  } else if (name == "distinguish") {
    ok = suite_distinguish(options, out);
  } else {
    throw OutOfRange("unknown suite: " + name);
  }
  out << "suite " << name << ": " << (ok ? "PASS" : "FAIL") << '\n';
  return ok;
}

}  // namespace densitrace::verify
