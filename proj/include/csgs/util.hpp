#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace csgs {

/// Deterministic 64-bit stream (splitmix64). Used instead of <random>
/// distributions so sample streams are bit-identical across platforms
/// and across thread counts.
struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// uniform in [0,1)
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// integer in [0, m)
  uint64_t below(uint64_t m) { return next() % m; }
};

/// Mix a base seed with a sample index; gives each sample an independent
/// stream regardless of evaluation order.
inline uint64_t mix_seed(uint64_t seed, uint64_t index) {
  SplitMix64 s(seed ^ (0x632be59bd9b4e019ull * (index + 1)));
  return s.next();
}

/// Compensated accumulator; keeps long reductions near round-off.
struct KahanAcc {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

/// Run fn(i) for i in [0, count). jobs <= 1 runs serially.  Results must be
/// written into per-index slots by the caller; no ordering is guaranteed.
inline void parallel_for(std::size_t count, int jobs,
                         const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::size_t nthreads = std::min<std::size_t>(jobs, count);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += nthreads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace csgs
