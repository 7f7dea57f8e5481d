#include "heliflow/threads.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

#ifdef __linux__
#include <sched.h>
#endif

namespace heliflow {

int thread_width() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
#ifdef __linux__
  // hardware_concurrency ignores cpuset/affinity limits (containers); an
  // oversubscribed pool on one core is far slower than a serial loop
  cpu_set_t set;
  if (sched_getaffinity(0, sizeof(set), &set) == 0) {
    int avail = CPU_COUNT(&set);
    if (avail >= 1) hw = std::min(hw, avail);
  }
#endif
  if (const char* env = std::getenv("HELIFLOW_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, cap);
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  int width = thread_width();
  if (width == 1 || n < 2 * static_cast<std::size_t>(width)) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(width);
  std::size_t chunk = (n + width - 1) / width;
  for (int t = 0; t < width; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace heliflow
