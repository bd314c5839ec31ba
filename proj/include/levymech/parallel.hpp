#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace levymech {

/// Chunked parallel loop over [0, n). The body must be pure per index; chunk
/// assignment never affects results.
inline void parallel_for(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t)>& body,
                         unsigned max_threads = 0) {
  if (n <= 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (max_threads != 0 && max_threads < hw) hw = max_threads;
  if (hw <= 1 || n < 32) {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::ptrdiff_t> next{0};
  const std::ptrdiff_t chunk = std::max<std::ptrdiff_t>(1, n / (8 * hw));
  auto worker = [&]() {
    for (;;) {
      const std::ptrdiff_t begin = next.fetch_add(chunk);
      if (begin >= n) return;
      const std::ptrdiff_t end = std::min(begin + chunk, n);
      for (std::ptrdiff_t i = begin; i < end; ++i) body(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(hw - 1);
  for (unsigned t = 1; t < hw; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace levymech
