#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "densitrace/bitstring.hpp"
#include "densitrace/deck.hpp"
#include "densitrace/density.hpp"

namespace densitrace {

/// Exact trace statistics for a small source string, computed by summing
/// over all 2^n deletion masks: position probabilities P[y][i] (probability
/// that y appears at trace position i) and occurrence means E[y] for every
/// substring y of any masked output with |y| >= min_length. Strings never
/// observed have probability 0.
class ExactStats {
 public:
  static constexpr std::size_t kMaxSourceLength = 16;

  double position_prob(const BitString& y, std::size_t i) const;
  double occurrence_mean(const BitString& y) const;

  /// All observed strings of the given length, in numeric order.
  std::vector<BitString> observed_strings(std::size_t length) const;

  /// Accumulated probability over every deletion mask; 1 up to rounding.
  double total_mask_probability() const { return total_mass_; }

  std::size_t source_length() const { return n_; }
  std::size_t min_length() const { return min_length_; }
  double p() const { return p_; }

  static std::uint64_t key(std::size_t length, std::uint64_t code) {
    return (static_cast<std::uint64_t>(length) << 32) | code;
  }

 private:
  friend ExactStats exact_statistics(const BitString& s, double p, std::size_t k);

  std::size_t n_ = 0;
  std::size_t min_length_ = 0;
  double p_ = 0.0;
  double total_mass_ = 0.0;
  std::unordered_map<std::uint64_t, std::vector<double>> probs_;  // key -> P[i], i 1-based
  std::unordered_map<std::uint64_t, double> means_;
};

/// Brute-force expectations over all deletion masks. Guarded at |s| <= 16
/// (GuardExceeded). Accepts k >= 1; the estimator identities only need
/// k >= 2 but length-1 statistics are well defined and occasionally handy.
ExactStats exact_statistics(const BitString& s, double p, std::size_t k);

/// Exact density map by direct evaluation of the defining kernel sum; no
/// sampling, any source length.
DensityMap exact_density_map(const BitString& s, std::size_t k, double p);

/// Exact k-subword deck by scanning s.
Deck exact_deck(const BitString& s, std::size_t k);

}  // namespace densitrace
