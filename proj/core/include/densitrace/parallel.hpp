#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace densitrace {

/// Worker count used by the parallel helpers below. Defaults to the hardware
/// concurrency; settable from the CLI. Results never depend on it.
unsigned worker_threads();
void set_worker_threads(unsigned threads);

/// Splits [0, count) into fixed-size blocks, runs `per_block(acc, begin, end)`
/// on workers (each block into its own zero-initialized accumulator copied
/// from `zero`), then folds the block accumulators in block order with
/// `merge(total, block_acc)`.
///
/// The block list and the merge order depend only on `count` and
/// `block_size`, so the result is bit-identical for any worker count.
template <class Acc, class PerBlock, class Merge>
Acc blocked_reduce(std::size_t count, std::size_t block_size, const Acc& zero,
                   PerBlock per_block, Merge merge) {
  const std::size_t num_blocks = count == 0 ? 0 : (count + block_size - 1) / block_size;
  std::vector<Acc> partials(num_blocks, zero);

  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(worker_threads(), num_blocks ? num_blocks : 1));
  if (threads <= 1) {
    for (std::size_t b = 0; b < num_blocks; ++b) {
      per_block(partials[b], b * block_size, std::min(count, (b + 1) * block_size));
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (;;) {
        const std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
        if (b >= num_blocks) return;
        per_block(partials[b], b * block_size, std::min(count, (b + 1) * block_size));
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  Acc total = zero;
  for (std::size_t b = 0; b < num_blocks; ++b) merge(total, partials[b]);
  return total;
}

/// Runs `fn(index)` for every index in [0, count) on the worker pool. Safe
/// when each index writes to its own slot.
template <class Fn>
void parallel_for_index(std::size_t count, Fn fn) {
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(worker_threads(), count ? count : 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  constexpr std::size_t kChunk = 1024;
  auto work = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk, std::memory_order_relaxed);
      if (begin >= count) return;
      const std::size_t end = std::min(count, begin + kChunk);
      for (std::size_t i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
}

}  // namespace densitrace
