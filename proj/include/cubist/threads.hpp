#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace cubist {

// Worker count: CUBIC_IST_THREADS wins, otherwise the hardware count.
inline int thread_count() {
  if (const char* env = std::getenv("CUBIC_IST_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? int(hc) : 1;
}

// Index-parallel loop.  Results must go into preallocated slots indexed by i
// so that output is identical for any worker count; reductions stay serial.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
  int workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

// Uniform double in [0, 1) built from the top 53 bits of the generator, so
// streams are reproducible across platforms and standard libraries.
inline double uniform_double(std::mt19937_64& g) {
  return double(g() >> 11) * 0x1.0p-53;
}

}  // namespace cubist
