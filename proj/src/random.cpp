#include "rtg/random.hpp"

namespace rtg {

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t Rng::categorical(std::span<const double> w) {
  double total = 0;
  for (double x : w) total += x;
  return categorical(w, total);
}

std::size_t Rng::categorical(std::span<const double> w, double total) {
  double u = uniform() * total;
  std::size_t last = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0) continue;
    last = i;
    if (u < w[i]) return i;
    u -= w[i];
  }
  return last;  // rounding fell off the end
}

}  // namespace rtg
