#include "densitrace/exact_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "densitrace/channel.hpp"
#include "densitrace/parallel.hpp"

namespace densitrace {

namespace {

struct MaskAccumulator {
  double total_mass = 0.0;
  std::unordered_map<std::uint64_t, std::vector<double>> probs;
  std::unordered_map<std::uint64_t, double> means;
};

void accumulate_mask_range(MaskAccumulator& acc, const BitString& s, std::size_t min_length,
                           const std::vector<double>& mask_prob_by_kept, std::uint64_t begin,
                           std::uint64_t end) {
  const std::size_t n = s.size();
  std::vector<int> output;
  output.reserve(n);
  for (std::uint64_t mask = begin; mask < end; ++mask) {
    output.clear();
    for (std::size_t b = 0; b < n; ++b) {
      if (mask & (std::uint64_t{1} << b)) output.push_back(s.bit(b));
    }
    const double prob = mask_prob_by_kept[output.size()];
    acc.total_mass += prob;
    const std::size_t len = output.size();
    for (std::size_t start = 0; start < len; ++start) {
      if (start + min_length > len) break;
      std::uint64_t code = 0;
      for (std::size_t l = 1; start + l <= len; ++l) {
        code = (code << 1) | static_cast<std::uint64_t>(output[start + l - 1]);
        if (l < min_length) continue;
        const std::uint64_t key = ExactStats::key(l, code);
        auto& row = acc.probs[key];  // grows lazily; slot `start` holds P[i = start+1]
        if (row.size() <= start) row.resize(start + 1, 0.0);
        row[start] += prob;
        acc.means[key] += prob;
      }
    }
  }
}

}  // namespace

double ExactStats::position_prob(const BitString& y, std::size_t i) const {
  if (i < 1) throw OutOfRange("positions are 1-based");
  const auto it = probs_.find(key(y.size(), y.code()));
  if (it == probs_.end()) return 0.0;
  if (i - 1 >= it->second.size()) return 0.0;
  return it->second[i - 1];
}

double ExactStats::occurrence_mean(const BitString& y) const {
  const auto it = means_.find(key(y.size(), y.code()));
  return it == means_.end() ? 0.0 : it->second;
}

std::vector<BitString> ExactStats::observed_strings(std::size_t length) const {
  std::vector<std::uint64_t> codes;
  for (const auto& [k, v] : means_) {
    if ((k >> 32) == length) codes.push_back(k & 0xFFFFFFFFu);
  }
  std::sort(codes.begin(), codes.end());
  std::vector<BitString> out;
  out.reserve(codes.size());
  for (auto code : codes) out.push_back(BitString::from_code(code, length));
  return out;
}

ExactStats exact_statistics(const BitString& s, double p, std::size_t k) {
  const std::size_t n = s.size();
  if (n > ExactStats::kMaxSourceLength) {
    throw GuardExceeded("exact statistics enumerate 2^n masks; guarded at n = 16");
  }
  if (k < 1 || k > n) throw OutOfRange("exact statistics require 1 <= k <= n");
  if (!(p >= 0.0) || p >= 1.0) throw InvalidP("p must lie in [0, 1)");

  // mask probability depends only on the kept-bit count
  std::vector<double> mask_prob(n + 1);
  for (std::size_t kept = 0; kept <= n; ++kept) {
    mask_prob[kept] = std::pow(p, static_cast<double>(n - kept)) *
                      std::pow(1.0 - p, static_cast<double>(kept));
  }

  const std::uint64_t mask_count = std::uint64_t{1} << n;
  constexpr std::uint64_t kMaskBlock = 4096;
  MaskAccumulator zero;
  auto merged = blocked_reduce(
      mask_count, kMaskBlock, zero,
      [&](MaskAccumulator& acc, std::size_t begin, std::size_t end) {
        accumulate_mask_range(acc, s, k, mask_prob, begin, end);
      },
      [](MaskAccumulator& total, const MaskAccumulator& part) {
        total.total_mass += part.total_mass;
        for (const auto& [key, row] : part.probs) {
          auto& dst = total.probs[key];
          if (dst.size() < row.size()) dst.resize(row.size(), 0.0);
          for (std::size_t i = 0; i < row.size(); ++i) dst[i] += row[i];
        }
        for (const auto& [key, mean] : part.means) total.means[key] += mean;
      });

  ExactStats stats;
  stats.n_ = n;
  stats.min_length_ = k;
  stats.p_ = p;
  stats.total_mass_ = merged.total_mass;
  stats.probs_ = std::move(merged.probs);
  stats.means_ = std::move(merged.means);
  return stats;
}

DensityMap exact_density_map(const BitString& s, std::size_t k, double p) {
  if (k < 2) throw KTooSmall("density maps require k >= 2");
  if (k > s.size()) throw OutOfRange("density maps require k <= n");
  if (!(p >= 0.0) || p >= 1.0) throw InvalidP("p must lie in [0, 1)");
  const std::size_t n = s.size();
  const std::size_t m = n - k + 1;
  DensityMap map(k, n);
  for (std::size_t j = 1; j <= m; ++j) {
    const std::uint64_t code = s.code_at(j - 1, k);
    for (std::size_t i = 1; i <= j; ++i) {
      map.at(code, i) += kernel(i, j, p);
    }
  }
  return map;
}

Deck exact_deck(const BitString& s, std::size_t k) {
  if (k < 2) throw KTooSmall("decks require k >= 2");
  if (k > s.size()) throw OutOfRange("decks require k <= n");
  std::vector<std::int64_t> counts(std::size_t{1} << k, 0);
  for (std::size_t a = 0; a + k <= s.size(); ++a) {
    ++counts[s.code_at(a, k)];
  }
  return Deck::from_counts(k, std::move(counts));
}

}  // namespace densitrace
