#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "rtg/growth.hpp"
#include "rtg/measure.hpp"
#include "rtg/model.hpp"
#include "rtg/rational.hpp"
#include "rtg/schedules.hpp"
#include "rtg/tree.hpp"

namespace rtg {

// X_0 = n > X_1 > ... > X_M = 1, then 0. absorption() = M + 1 = A_n.
struct MassChainPath {
  std::vector<long> values;  // including the trailing 0
  long absorption() const { return static_cast<long>(values.size()) - 1; }
  // X_m for any m >= 0
  long at(long m) const { return m < absorption() ? values[static_cast<size_t>(m)] : 0; }
};

// Parts X_0 - X_1, X_1 - X_2, ..., X_{M-1} - X_M, then 1.
std::vector<long> composition_of(const MassChainPath& p);
MassChainPath path_of_composition(const std::vector<long>& parts);

// Sizes of the block of label 1 along the path from the root to leaf 1.
MassChainPath residual_chain(const LabelledTree& t);

// Source of first-step transitions X -> X_1 for the residual chain.
class ResidualSampler {
 public:
  // size-based named model; tables up to nmax
  ResidualSampler(const GrowthModel& m, int nmax);
  // any measure that can sample first blocks (levels up to its max_level)
  explicit ResidualSampler(std::shared_ptr<const DislocationMeasure> d);
  explicit ResidualSampler(std::shared_ptr<const IndexedExample> ex);

  long first_step(long n, Rng& rng) const;
  MassChainPath sample(long n, Rng& rng) const;
  // lambda_n with lambda_2 = 1 for models, the measure's own scale otherwise
  double lambda(long n) const;
  long nmax() const { return nmax_; }

 private:
  std::shared_ptr<FirstBlockSampler> fb_;
  std::vector<double> lam_;
  std::shared_ptr<const DislocationMeasure> d_;
  std::shared_ptr<const IndexedExample> ex_;
  long nmax_ = 0;
};

// P(X_1 = j), j = 1..n-1 (index j; index 0 and n are 0).
std::vector<Rational> first_step_law_exact(const GrowthModel& m, int n, bool force = false);
std::vector<double> first_step_law(const GrowthModel& m, int n);
// kappa({#Gamma_1^[n] = j}) / lambda_n from the measure's cylinders (n <= 10).
template <class T>
std::vector<T> first_step_law_kappa(const DislocationMeasure& d, int n, bool force = false);

// t -> X_{floor(lambda_n t)} / n
double scaled_value(const MassChainPath& p, double lambda_n, double t);

}  // namespace rtg
