#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>
#include <vector>

namespace rzlmi {

using Rng = std::mt19937_64;

// Independent generator for sample `index`, so results do not depend on
// how samples are distributed over threads.
inline Rng stream_rng(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  std::seed_seq seq{static_cast<std::uint32_t>(z), static_cast<std::uint32_t>(z >> 32)};
  return Rng(seq);
}

// Uniform point on the unit sphere in R^d.
inline std::vector<double> sphere_direction(Rng& rng, int d) {
  std::normal_distribution<double> g;
  std::vector<double> v(d);
  double n = 0;
  do {
    n = 0;
    for (auto& x : v) {
      x = g(rng);
      n += x * x;
    }
  } while (n < 1e-24 && d > 0);
  n = std::sqrt(n);
  for (auto& x : v) x /= n;
  return v;
}

// Worker count used when a caller passes threads <= 0.
int default_threads();
void set_default_threads(int n);

// Runs body(i) for i in [0, n) on up to `threads` workers. The first
// exception by index is rethrown after all workers finish.
template <class F>
void parallel_for(int n, int threads, F&& body) {
  if (threads <= 0) threads = default_threads();
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += threads) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace rzlmi
