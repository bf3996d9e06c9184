#ifndef ZKLB_PARALLEL_HPP
#define ZKLB_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace zklb {

/// Worker count: ZKLB_THREADS if set (clamped to >= 1), else hardware threads.
inline unsigned max_threads() {
  if (const char* env = std::getenv("ZKLB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/**
 * Run f(i) for i in [0, count). Work items must be independent; results
 * should be written to preallocated per-index slots so the outcome does not
 * depend on scheduling.
 */
template <typename F>
void parallel_for(int count, F&& f) {
  const unsigned workers = std::min<unsigned>(max_threads(), count > 0 ? count : 0);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) f(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace zklb

#endif
