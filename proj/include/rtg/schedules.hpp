#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rtg/family.hpp"
#include "rtg/measure.hpp"

namespace rtg {

class Rng;

// kappa = sum_j w_j delta_{Gamma(j)}, w_j = gamma j^(gamma-1), Gamma(j) in P^{[j-1],{j}}
// a two-block step family with limit first-block frequency x_j = 1 - 1/j.
// Families are listed for j <= horizon; later ones restrict trivially below their index.
class IndexedExample {
 public:
  enum class Early : std::uint8_t { None, Half, Reciprocal };
  struct Entry {
    std::int64_t release = 0;  // level from which A_{x_j} applies
    Early early = Early::None;  // rule used before release
  };
  struct Window {
    int m;
    std::int64_t e, j, k, l;
  };

  std::string name;
  double gamma = 0.5;
  std::int64_t horizon = 0;
  std::vector<Entry> entries;  // index j

  // 3.6(b) bookkeeping: total weight and least index of families held near 1/2
  std::vector<double> active_weight;
  std::vector<std::int64_t> active_low;
  std::int64_t onset = 0;
  // 3.7 bookkeeping
  std::vector<Window> windows;

  double weight(std::int64_t j) const;
  double limit(std::int64_t j) const { return 1.0 - 1.0 / static_cast<double>(j); }
  bool is_evil(std::int64_t j) const { return entries[j].early != Early::None; }
  std::int64_t first_block_count(std::int64_t j, std::int64_t n) const;
  std::shared_ptr<StepFamily> family(std::int64_t j) const;

  // lambda_n for n <= horizon
  double lambda(std::int64_t n) const;
  // X_1 for a chain at size n (n <= horizon)
  std::int64_t sample_first_block(std::int64_t n, Rng& rng) const;

  // Finite-atom measure with atoms j <= jmax and a power tail beyond.
  DislocationMeasure measure(std::int64_t jmax) const;

  void finalize();  // builds the lambda prefix table

 private:
  std::vector<double> prefix_;  // prefix_[n] = lambda_n
};

IndexedExample example_good(double gamma, std::int64_t horizon);
IndexedExample example_half_delay(double gamma, std::int64_t horizon);
IndexedExample example_mixed(double gamma, int windows);

// Relative tolerance used for the "approximately at frequency" test in the mixed schedule.
inline constexpr double kScheduleTolerance = 0.01;

}  // namespace rtg
