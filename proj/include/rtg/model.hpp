#pragma once

#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "rtg/partition.hpp"
#include "rtg/rational.hpp"

namespace rtg {

class DislocationMeasure;

enum class ModelKind { Ford, AlphaGamma, AlphaTheta, PoissonDirichlet, FromKappa };

std::string to_string(ModelKind k);

// Normalising sequence c(n) of the Poisson-Dirichlet growth rule, cached.
class GibbsTable {
 public:
  GibbsTable(Rational alpha, Rational theta);
  // c(n) exactly, n >= 2
  Rational c_exact(int n);
  // w_n / c(n) in floating point; this ratio stays bounded for large n.
  double q(int n);
  Rational w_exact(int n) const;  // prod_{i=1}^{n-1} (i - alpha)

 private:
  Rational a_, t_;
  double ad_, td_;
  std::mutex mu_;
  std::vector<Rational> c_;  // index n
  std::vector<double> q_;    // index n
};

// A growth rule g_n(pi, i): i = 0 inserts below the first branch point, i in 1..k
// recurses into block i, i = k+1 attaches a new leaf at the branch point.
class GrowthModel {
 public:
  static GrowthModel ford(const Rational& alpha);
  static GrowthModel alpha_gamma(const Rational& alpha, const Rational& gamma);
  static GrowthModel alpha_theta(const Rational& alpha, const Rational& theta);
  static GrowthModel poisson_dirichlet(const Rational& alpha, const Rational& theta);
  static GrowthModel from_kappa(std::shared_ptr<const DislocationMeasure> kappa);

  ModelKind kind() const { return kind_; }
  const Rational& alpha() const { return a_; }
  // gamma (alpha-gamma) or theta (alpha-theta, Poisson-Dirichlet)
  const Rational& second() const { return b_; }
  const std::shared_ptr<const DislocationMeasure>& kappa() const { return kappa_; }

  // True when g_n(pi, .) depends on pi only through block sizes.
  bool size_based() const { return kind_ != ModelKind::FromKappa; }
  // Only binary splits occur.
  bool binary() const;
  bool exact_capable() const;

  // (g_n(0), g_n(pi,1), ..., g_n(pi,k+1)) with n = #pi.
  template <class T>
  std::vector<T> growth_probs(const Partition& pi) const;
  // Fast path for size-based models; sizes in least-element order, n = sum(sizes).
  void growth_probs_sizes(std::span<const int> sizes, int n, std::vector<double>& out) const;
  template <class T>
  T g0(int n) const;
  // g_n(pi, 1) for size-based models; depends on #B_1 and n only.
  double g_first(int b1, int n) const;

  std::string describe() const;

 private:
  ModelKind kind_ = ModelKind::Ford;
  Rational a_, b_;
  double ad_ = 0, bd_ = 0;
  std::shared_ptr<const DislocationMeasure> kappa_;
  std::shared_ptr<GibbsTable> gibbs_;

  void validate() const;
};

// g_n(0) = 1 - lambda_n / lambda_{n+1},
// g_n(pi,i) = (lambda_n / lambda_{n+1}) kappa(P^{pi+i}) / kappa(P^pi).
template <class T>
std::vector<T> growth_from_kappa(const DislocationMeasure& kappa, const Partition& pi);

}  // namespace rtg
