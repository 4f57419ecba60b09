#pragma once

#include <vector>

#include "rtg/model.hpp"
#include "rtg/partition.hpp"
#include "rtg/random.hpp"
#include "rtg/tree.hpp"

namespace rtg {

// T_n -> T_{n+1} by descending from the first branch point.
void grow_step_inplace(LabelledTree& t, const GrowthModel& m, Rng& rng);
LabelledTree grow_step(const LabelledTree& t, const GrowthModel& m, Rng& rng);
LabelledTree grow(const GrowthModel& m, int n, Rng& rng);

// Split of [n] with law p_n, built with the growth rule along levels 2..n.
Partition sample_split_chain(const GrowthModel& m, int n, Rng& rng);
// Uses kappa directly when the model is kappa-defined and kappa can sample.
Partition sample_split(const GrowthModel& m, int n, Rng& rng);

// #B_1 of a p_n-split for size-based models. Tables are built once up to nmax.
class FirstBlockSampler {
 public:
  FirstBlockSampler(const GrowthModel& m, int nmax);
  int nmax() const { return static_cast<int>(g0_.size()) - 1; }
  // O(log n): last reset level from the lambda table, then a beta-binomial urn.
  long sample(int n, Rng& rng) const;
  // Level-by-level chain, O(n). Same law.
  long sample_chain(int n, Rng& rng) const;
  // P(#B_1 = b) for b = 1..n-1 (index b), by the same recursion run forward.
  std::vector<double> law(int n) const;

 private:
  std::vector<double> g0_, r_;  // g_first(b, j) = (b - c0) * r_[j]
  std::vector<double> lam_;     // lambda_j / lambda_2, lambda_1 = 0
  double c0_ = 0;
  double urn_shift_ = 0;  // other-side urn weight right after a reset
};

}  // namespace rtg
