#include "densitrace/parallel.hpp"

namespace densitrace {

namespace {
std::atomic<unsigned>& thread_knob() {
  static std::atomic<unsigned> value{0};  // 0 = use hardware concurrency
  return value;
}
}  // namespace

unsigned worker_threads() {
  const unsigned configured = thread_knob().load(std::memory_order_relaxed);
  if (configured != 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

void set_worker_threads(unsigned threads) {
  thread_knob().store(threads, std::memory_order_relaxed);
}

}  // namespace densitrace
