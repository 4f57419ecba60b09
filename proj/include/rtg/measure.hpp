#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rtg/family.hpp"
#include "rtg/model.hpp"
#include "rtg/partition.hpp"
#include "rtg/rational.hpp"

namespace rtg {

class Rng;

struct Atom {
  FamilyPtr family;
  double weight = 0;
  std::optional<Rational> exact;  // set when the weight is rational
  int onset = 0;                  // family->first_split_level()
};

// Unlisted atoms Gamma(j) in P^{[j-1],{j}} for j >= first, weight gamma j^(gamma-1),
// first-block limit frequency 1 - 1/j. Only levels n < first can be queried.
struct PowerTail {
  double gamma = 0.5;
  int first = 0;
  double weight(int j) const;
  // bracket for sum_{j >= from} (1/j) * weight(j)
  std::pair<double, double> deficit_sum_bounds(long from) const;
};

struct PaintboxAtom {
  std::vector<Rational> s;  // ranked, sum <= 1
  Rational weight;
};

class DislocationMeasure {
 public:
  enum class Kind { FiniteAtomic, OrderedBeta, PaintboxAtoms, BrownianPaintbox, FromGrowthRule };

  static DislocationMeasure finite_atomic(std::vector<Atom> atoms, std::optional<PowerTail> tail = std::nullopt);
  // Normalised so that kappa({1},{2}) = 1; raw_scale() gives the beta-integral scale.
  static DislocationMeasure ordered_beta(const Rational& alpha, const Rational& theta);
  static DislocationMeasure paintbox_atoms(std::vector<PaintboxAtom> atoms);
  // nu(ds) = scale * sqrt(2/pi) (s1 s2)^{-3/2} on binary s with s1 in [1/2,1).
  static DislocationMeasure brownian_paintbox(double scale = 1.0);
  static DislocationMeasure from_growth_rule(const GrowthModel& model, const Rational& lambda2);

  DislocationMeasure scaled(const Rational& c) const;
  DislocationMeasure scaled(double c) const;
  // Scaled so that kappa({1},{2}) = 1.
  DislocationMeasure normalized() const;

  Kind kind() const { return kind_; }
  bool supports_exact() const;
  bool exchangeable() const { return kind_ == Kind::PaintboxAtoms || kind_ == Kind::BrownianPaintbox; }
  std::string describe() const;

  // kappa(P^pi) for non-trivial pi.
  template <class T>
  T cylinder(const Partition& pi) const;
  // lambda_n = kappa(P \ P^[n]); lambda_1 = 0.
  template <class T>
  T lambda(int n) const;

  // First-block Laplace exponent: int (1 - |Gamma_1|^s) kappa(dGamma).
  double laplace_exponent(double s) const;
  // Uniform-leaf exponent: int (1 - sum_i (|Gamma|_i^down)^{s+1}) kappa(dGamma).
  double uniform_leaf_exponent(double s) const;

  // A split of [n] with law kappa(. \cap P\P^[n]) / lambda_n.
  Partition sample_split(int n, Rng& rng) const;
  // Its first-block size.
  long sample_first_block(int n, Rng& rng) const;

  // Accessors
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<PowerTail>& tail() const { return tail_; }
  const std::vector<PaintboxAtom>& paintbox() const { return pb_; }
  const Rational& alpha() const { return a_; }
  const Rational& theta() const { return t_; }
  const Rational& scale() const { return scale_; }
  double scale_d() const { return scale_d_; }
  bool scale_exact() const { return scale_exact_; }
  // theta B(theta, 1 - alpha) for the ordered beta case
  double raw_scale() const;
  const std::shared_ptr<const GrowthModel>& model() const { return model_; }
  const Rational& lambda2() const { return lambda2_; }
  // largest level at which cylinders are defined (tail-limited), max int if unlimited
  int max_level() const;

 private:
  Kind kind_ = Kind::FiniteAtomic;
  std::vector<Atom> atoms_;  // sorted by onset
  std::vector<double> prefix_;
  std::vector<Rational> prefix_exact_;
  bool all_exact_ = true;
  std::optional<PowerTail> tail_;
  std::vector<PaintboxAtom> pb_;
  Rational a_, t_;
  Rational scale_ = 1;
  double scale_d_ = 1.0;
  bool scale_exact_ = true;
  std::shared_ptr<const GrowthModel> model_;
  Rational lambda2_;

  template <class T>
  T scale_as() const;
  template <class T>
  T raw_cylinder(const Partition& pi) const;
  template <class T>
  T raw_lambda(int n) const;
  double raw_psi(double s) const;
  double raw_psi_uniform(double s) const;
};

// Exact kappa_s(P^pi) for a paintbox with ranked frequencies s.
template <class T>
T paintbox_cylinder(const std::vector<T>& s, const Partition& pi);

}  // namespace rtg
