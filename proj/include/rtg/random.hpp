#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace rtg {

// SplitMix64 finaliser, used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }
  // Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  // Uniform on (0,1].
  double uniform_pos() { return 1.0 - uniform(); }
  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_); }
  // Index i with probability w[i] / sum(w).
  std::size_t categorical(std::span<const double> w);
  std::size_t categorical(std::span<const double> w, double total);

  Rng fork(std::uint64_t stream) { return Rng(mix_seed(eng_(), stream)); }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace rtg
