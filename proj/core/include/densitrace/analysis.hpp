#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "densitrace/bitstring.hpp"
#include "densitrace/channel.hpp"
#include "densitrace/density.hpp"

namespace densitrace {

/// Closed-form sample-complexity quantities for k = c*log2(n) at deletion
/// probability p. All logarithms are base 2 except the truncation depth d,
/// which uses natural logs.
struct BoundsReport {
  double c = 0.0;
  double p = 0.0;
  std::size_t n = 0;

  double alpha = 0.0;           ///< per-trace sensitivity exponent
  double beta = 0.0;            ///< = 2*alpha - 2c*log2(1-p) + 1, the f_c degree
  double f_n = 0.0;             ///< (1 + 2 n^alpha)^2 / (2 n^(2c log2(1-p) - 1))
  double gamma = 0.0;           ///< truncated-estimator exponent (= alpha - 1)
  double omega = 0.0;           ///< untruncated-estimator exponent (= alpha + 1)
  double new_exponent = 0.0;    ///< trace-count degree of the improved deck bound
  double prior_exponent = 0.0;  ///< trace-count degree of the previous deck bound
  double d = 0.0;               ///< truncation depth at k = c*log2(n)
};

/// Binary entropy H(x) = -x log2 x - (1-x) log2(1-x), with H(0) = H(1) = 0.
double binary_entropy(double x);

/// Evaluates every bound function at (c, p, n). Requires 0 < p < 0.5
/// (InvalidP), c > 0 and n >= 2.
BoundsReport bound_functions(double c, double p, std::size_t n);

enum class BudgetKind { entry, map };

/// Trace budget sufficient for entry-wise (log(2/delta) eps^-2 f_c(n)) or
/// whole-map (log(2 n^(1+c)/delta) eps^-2 f_c(n)) density estimation with
/// error below eps at confidence 1-delta; rounded up to an integer.
std::uint64_t traces_needed(BudgetKind kind, std::size_t n, double c, double p, double eps,
                            double delta);

struct DensityDistance {
  double linf = 0.0;                 ///< max over all (x, i)
  std::vector<double> per_kmer_l1;   ///< indexed by k-mer code
};

/// Distance between two density maps of identical shape (ShapeMismatch
/// otherwise). For every k-mer the outputs satisfy
/// max_i |delta[i]| >= (1/n) * l1(delta).
DensityDistance density_distance(const DensityMap& a, const DensityMap& b);

/// Identifies which candidate source generated the traces: estimates the
/// density map from the traces, computes each candidate's exact map, and
/// returns the index minimizing the l-infinity distance. Ties break toward
/// the lexicographically smaller candidate string, then the earlier index.
std::size_t distinguish(const TraceSet& traces, const std::vector<BitString>& candidates,
                        std::size_t k, double p);

/// Bounds CSV with columns p,c,alpha,beta,gamma,omega,thm2_exp,prior_exp,d;
/// one row per (p, c) grid point, p outer, c inner.
void write_bounds_csv(std::ostream& out, const std::vector<double>& c_values,
                      const std::vector<double>& p_values, std::size_t n,
                      const std::vector<std::string>& header = {});

}  // namespace densitrace
