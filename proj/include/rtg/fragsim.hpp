#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "rtg/model.hpp"
#include "rtg/random.hpp"
#include "rtg/tree.hpp"

namespace rtg {

// Genealogy of the restricted fragmentation chain on [n]: every block B waits an
// Exp(lambda_#B) time and then splits with law p_#B. Edge lengths are these waits;
// singleton blocks never split again and their leaf edges get length 0.
struct TimedGenealogy {
  LabelledTree tree;
  std::vector<std::pair<int, double>> holds;  // (block size, holding time) per split
};

TimedGenealogy ctmc_genealogy(const GrowthModel& m, double lambda2, int n, Rng& rng);

// Ranked binary dislocation s = (s1, 1 - s1) with s1 in [1/2, 1 - eps], law nu
// restricted there and normalised; total() is the restricted mass.
class BinaryNu {
 public:
  virtual ~BinaryNu() = default;
  virtual double sample_s1(Rng& rng) const = 0;
  virtual double total() const = 0;
  // int (1 - s1) over the cut-off region s1 > 1 - eps
  virtual double cut_mass_loss() const { return 0.0; }
};

// Single atom at (s1, 1 - s1) with mass w.
class AtomNu final : public BinaryNu {
 public:
  AtomNu(double s1, double w);
  double sample_s1(Rng&) const override { return s1_; }
  double total() const override { return w_; }

 private:
  double s1_, w_;
};

// scale * sqrt(2/pi) (s1 (1 - s1))^{-3/2} on [1/2, 1 - eps], sampled by its exact inverse CDF.
class BrownianNu final : public BinaryNu {
 public:
  BrownianNu(double eps, double scale = 1.0);
  double sample_s1(Rng& rng) const override;
  double total() const override { return total_; }
  double cut_mass_loss() const override;
  double eps() const { return eps_; }
  // integral of f(s1) against the normalised restricted law, by quadrature
  double mean_of(const std::function<double(double)>& f) const;

 private:
  double eps_, scale_, zmax_, total_;
};

struct MassFragNode {
  double mass = 1;
  double hold = 0;
  std::vector<int> children;
};

// Self-similar mass fragmentation: a block of mass x waits Exp(x^{-gamma} nu.total())
// and splits into x s1, x (1 - s1). Blocks below mass_floor are not split further
// (hold 0). Node 0 is the initial unit block.
// With erosion on, the dropped splits s1 > 1 - eps are replaced by their mean mass
// loss: between splits x' = -e x^{1-gamma}, e = nu.cut_mass_loss(). The stored mass
// of a node is its mass at birth.
struct MassFragTree {
  std::vector<MassFragNode> nodes;
  double height() const;  // largest root-to-leaf sum of holds
};

MassFragTree mass_frag_tree(double gamma, const BinaryNu& nu, double mass_floor, Rng& rng, bool erosion = false,
                            std::size_t max_nodes = 20'000'000);
// Same height without storing the tree.
double mass_frag_height(double gamma, const BinaryNu& nu, double mass_floor, Rng& rng, bool erosion = false);

}  // namespace rtg
