#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace phom {

/// Runs fn(begin, end) over fixed-size chunks of [0, n), distributing chunks
/// over `jobs` threads. The chunk partition depends only on n, so results
/// accumulated per chunk and combined in chunk order are bit-identical for
/// every jobs value.
inline void parallel_chunks(std::size_t n, int jobs,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
  constexpr std::size_t kChunk = 64;
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  if (jobs <= 1 || n_chunks <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c)
      fn(c * kChunk, std::min(n, (c + 1) * kChunk));
    return;
  }
  std::vector<std::thread> pool;
  const int workers = std::min<std::size_t>(jobs, n_chunks);
  std::atomic<std::size_t> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        fn(c * kChunk, std::min(n, (c + 1) * kChunk));
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace phom
