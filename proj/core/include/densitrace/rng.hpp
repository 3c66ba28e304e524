#pragma once

#include <cstdint>

namespace densitrace {

/// splitmix64 (Vigna, public domain). One 64-bit state word, passes BigCrush;
/// used here both as the per-trace generator and as the seed mixer that
/// derives independent substreams.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Deterministic substream seed for item `index` under `master`. The master
/// seed is XORed with a golden-ratio multiple of the index and remixed, so
/// streams are independent of the order or thread in which they are drawn.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 mixer(master ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
  return mixer.next();
}

}  // namespace densitrace
