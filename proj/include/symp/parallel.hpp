#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace symp {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// Runs fn(begin, end) over [0, n) split into `chunk`-sized blocks handed
/// out dynamically. fn must be safe to call concurrently; any reduction
/// it performs must be order-independent (integer sums) or keyed by chunk
/// index rather than worker.
template <class Fn>
void parallel_chunks(std::int64_t n, std::int64_t chunk, int threads, Fn fn) {
  threads = resolve_threads(threads);
  if (n <= 0) return;
  if (threads == 1 || n <= chunk) {
    for (std::int64_t b = 0; b < n; b += chunk) fn(b, std::min(b + chunk, n));
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::int64_t b = next.fetch_add(chunk);
      if (b >= n) return;
      fn(b, std::min(b + chunk, n));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

/// Runs fn(index) for index in [0, n) across workers; used where each
/// index owns an independent seeded substream so results do not depend on
/// the thread count.
template <class Fn>
void parallel_indexed(std::int64_t n, int threads, Fn fn) {
  parallel_chunks(n, 1, threads, [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) fn(i);
  });
}

}  // namespace symp
