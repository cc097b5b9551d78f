#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace groupdens {

// Worker-pool size: explicit argument wins, then GROUPDENS_THREADS, then 1.
// Single-threaded by default keeps runs trivially reproducible; parallel
// reductions below are chunk-ordered and give identical results regardless.
inline int default_threads() {
  if (const char* env = std::getenv("GROUPDENS_THREADS")) {
    int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return 1;
}

// Chunked deterministic reduction over [0, n): each worker folds its own
// contiguous range in index order, results are combined left to right.
template <class R, class PerIndex, class Combine>
R parallel_reduce(size_t n, R init, PerIndex f, Combine combine, int threads) {
  if (threads < 1) threads = 1;
  if (threads == 1 || n < 64) {
    R acc = init;
    for (size_t i = 0; i < n; ++i) acc = combine(std::move(acc), f(i));
    return acc;
  }
  size_t t = std::min<size_t>(threads, n);
  std::vector<R> partial(t, init);
  std::vector<std::thread> pool;
  for (size_t w = 0; w < t; ++w) {
    size_t lo = n * w / t, hi = n * (w + 1) / t;
    pool.emplace_back([&, w, lo, hi] {
      R acc = init;
      for (size_t i = lo; i < hi; ++i) acc = combine(std::move(acc), f(i));
      partial[w] = std::move(acc);
    });
  }
  for (auto& th : pool) th.join();
  R acc = init;
  for (size_t w = 0; w < t; ++w) acc = combine(std::move(acc), partial[w]);
  return acc;
}

}  // namespace groupdens
