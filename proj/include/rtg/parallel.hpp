#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "rtg/random.hpp"

namespace rtg {

// Runs fn(i, rng_i) for i in [0, count). Each index gets its own stream seeded
// from (seed, i), so results do not depend on the thread count.
template <class Fn>
void parallel_samples(std::size_t count, std::uint64_t seed, int threads, Fn&& fn) {
  int t = std::max(1, threads);
  if (t == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) {
      Rng rng(mix_seed(seed, i));
      fn(i, rng);
    }
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex mu;
  for (int k = 0; k < t; ++k) {
    pool.emplace_back([&, k] {
      try {
        for (std::size_t i = k; i < count; i += t) {
          Rng rng(mix_seed(seed, i));
          fn(i, rng);
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace rtg
