#include "densitrace/analysis.hpp"

#include <cmath>
#include <ostream>

#include "densitrace/exact_oracle.hpp"
#include "densitrace/format.hpp"

namespace densitrace {

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw OutOfRange("binary entropy needs x in [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

BoundsReport bound_functions(double c, double p, std::size_t n) {
  if (!(p > 0.0) || p >= 0.5) throw InvalidP("bound functions require 0 < p < 0.5");
  if (!(c > 0.0)) throw OutOfRange("bound functions require c > 0");
  if (n < 2) throw OutOfRange("bound functions require n >= 2");

  const double q = p / (1.0 - p);
  const double log_ratio = std::log2((1.0 - p) / p);  // = -log2(q)
  const double entropy_term = (c * binary_entropy(1.0 - q) + c * std::log2(q)) / (1.0 - q);
  const double dn = static_cast<double>(n);

  BoundsReport r;
  r.c = c;
  r.p = p;
  r.n = n;
  r.alpha = 1.0 + c * log_ratio + entropy_term;
  r.beta = 2.0 * r.alpha - 2.0 * c * std::log2(1.0 - p) + 1.0;
  r.f_n = std::pow(1.0 + 2.0 * std::pow(dn, r.alpha), 2.0) /
          (2.0 * std::pow(dn, 2.0 * c * std::log2(1.0 - p) - 1.0));
  r.gamma = c * log_ratio + entropy_term;
  r.omega = 2.0 + c * log_ratio + entropy_term;
  r.new_exponent =
      1.0 + c * (((1.0 - p) * binary_entropy(1.0 - q) + p * std::log2(q)) / (0.5 - p) +
                 2.0 * std::log2(1.0 / (1.0 - p)));
  r.prior_exponent = 4.0 + 12.0 * c * (std::exp(2.0) / (0.5 - p)) + c * std::log2(4.0);
  // truncation depth at k = c log2(n); same expression as truncation_depth
  // but with a real-valued k (natural logs)
  const double base = std::exp(2.0) / (0.5 - p);
  r.d = base * (c * std::log2(dn) * std::log(base) + std::log(dn));
  return r;
}

std::uint64_t traces_needed(BudgetKind kind, std::size_t n, double c, double p, double eps,
                            double delta) {
  if (!(eps > 0.0)) throw OutOfRange("traces_needed requires eps > 0");
  if (!(delta > 0.0) || delta >= 1.0) throw OutOfRange("traces_needed requires 0 < delta < 1");
  const BoundsReport r = bound_functions(c, p, n);
  const double dn = static_cast<double>(n);
  const double log_factor = kind == BudgetKind::entry
                                ? std::log2(2.0 / delta)
                                : std::log2(2.0 * std::pow(dn, 1.0 + c) / delta);
  const double budget = std::ceil(log_factor * r.f_n / (eps * eps));
  if (!(budget >= 1.0) || budget > 1e18) {
    throw OutOfRange("trace budget out of integer range");
  }
  return static_cast<std::uint64_t>(budget);
}

DensityDistance density_distance(const DensityMap& a, const DensityMap& b) {
  if (a.k() != b.k() || a.n() != b.n()) {
    throw ShapeMismatch("density maps differ in k or n");
  }
  DensityDistance out;
  out.per_kmer_l1.assign(a.kmer_count(), 0.0);
  for (std::uint64_t code = 0; code < a.kmer_count(); ++code) {
    const auto ra = a.row(code);
    const auto rb = b.row(code);
    double l1 = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
      const double diff = std::fabs(ra[i] - rb[i]);
      l1 += diff;
      if (diff > out.linf) out.linf = diff;
    }
    out.per_kmer_l1[code] = l1;
  }
  return out;
}

std::size_t distinguish(const TraceSet& traces, const std::vector<BitString>& candidates,
                        std::size_t k, double p) {
  if (candidates.size() < 2) throw ShapeMismatch("distinguish requires at least 2 candidates");
  for (const auto& cand : candidates) {
    if (cand.size() != traces.source_length) {
      throw ShapeMismatch("candidate length differs from trace source length");
    }
  }
  const DensityMap estimated = estimate_density_map(traces, k, p);

  std::size_t best = 0;
  double best_dist = 0.0;
  bool have_best = false;
  for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
    const DensityMap exact = exact_density_map(candidates[idx], k, p);
    const double dist = density_distance(estimated, exact).linf;
    if (!have_best || dist < best_dist ||
        (dist == best_dist && candidates[idx] < candidates[best])) {
      best = idx;
      best_dist = dist;
      have_best = true;
    }
  }
  return best;
}

void write_bounds_csv(std::ostream& out, const std::vector<double>& c_values,
                      const std::vector<double>& p_values, std::size_t n,
                      const std::vector<std::string>& header) {
  for (const auto& line : header) out << "# " << line << '\n';
  out << "p,c,alpha,beta,gamma,omega,thm2_exp,prior_exp,d\n";
  for (double p : p_values) {
    for (double c : c_values) {
      const BoundsReport r = bound_functions(c, p, n);
      out << format_double(p) << ',' << format_double(c) << ',' << format_double(r.alpha) << ','
          << format_double(r.beta) << ',' << format_double(r.gamma) << ','
          << format_double(r.omega) << ',' << format_double(r.new_exponent) << ','
          << format_double(r.prior_exponent) << ',' << format_double(r.d) << '\n';
    }
  }
}

}  // namespace densitrace
