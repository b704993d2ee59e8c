#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace radstein {

/// Splits [0, n) into a fixed number of contiguous chunks and runs `body` on
/// each. The chunk layout depends only on `n` and `chunks`, never on the
/// thread count, so per-chunk results combined in chunk order are bitwise
/// reproducible for 1, 2 or 8 threads.
inline void parallel_chunks(std::int64_t n, int chunks, int threads,
                            const std::function<void(int, std::int64_t, std::int64_t)>& body) {
  if (n <= 0) return;
  if (chunks > n) chunks = static_cast<int>(n);
  if (chunks < 1) chunks = 1;
  if (threads < 1) threads = 1;
  auto chunk_range = [&](int c) {
    const std::int64_t lo = n * c / chunks;
    const std::int64_t hi = n * (c + 1) / chunks;
    return std::pair<std::int64_t, std::int64_t>{lo, hi};
  };
  if (threads == 1 || chunks == 1) {
    for (int c = 0; c < chunks; ++c) {
      auto [lo, hi] = chunk_range(c);
      body(c, lo, hi);
    }
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= chunks) return;
      auto [lo, hi] = chunk_range(c);
      body(c, lo, hi);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace radstein
