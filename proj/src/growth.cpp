#include "rtg/growth.hpp"

#include <algorithm>
#include <random>

#include "rtg/error.hpp"
#include "rtg/measure.hpp"

namespace rtg {

void grow_step_inplace(LabelledTree& t, const GrowthModel& m, Rng& rng) {
  int v = t.top();
  std::vector<int> sizes;
  std::vector<double> probs;
  for (;;) {
    const auto& node = t.node(v);
    if (node.children.empty()) {
      t.insert_on_edge(v);
      return;
    }
    const int k = static_cast<int>(node.children.size());
    if (m.size_based()) {
      sizes.clear();
      for (int c : node.children) sizes.push_back(t.node(c).leaves);
      m.growth_probs_sizes(sizes, node.leaves, probs);
    } else {
      Partition pi = relabel_increasing(t.child_label_sets(v));
      probs = m.growth_probs<double>(pi);
    }
    std::size_t e = rng.categorical(probs, 1.0);
    if (e == 0) {
      t.insert_on_edge(v);
      return;
    }
    if (static_cast<int>(e) == k + 1) {
      t.attach_leaf(v);
      return;
    }
    v = node.children[e - 1];
  }
}

LabelledTree grow_step(const LabelledTree& t, const GrowthModel& m, Rng& rng) {
  LabelledTree u = t;
  grow_step_inplace(u, m, rng);
  return u;
}

LabelledTree grow(const GrowthModel& m, int n, Rng& rng) {
  if (n < 1) throw SpecError("grow needs n >= 1");
  LabelledTree t;
  t.raw_nodes().reserve(static_cast<size_t>(2 * n + 2));
  while (t.leaf_count() < n) grow_step_inplace(t, m, rng);
  return t;
}

Partition sample_split_chain(const GrowthModel& m, int n, Rng& rng) {
  if (n < 2) throw SpecError("a split needs n >= 2");
  std::vector<int> ids{0, 1};
  std::vector<int> sizes{1, 1};
  std::vector<double> probs;
  for (int j = 2; j < n; ++j) {
    if (m.size_based()) {
      m.growth_probs_sizes(sizes, j, probs);
    } else {
      probs = m.growth_probs<double>(Partition::from_block_ids(ids));
    }
    std::size_t e = rng.categorical(probs, 1.0);
    if (e == 0) {
      ids.assign(static_cast<size_t>(j), 0);
      ids.push_back(1);
      sizes = {j, 1};
    } else {
      int b = static_cast<int>(e) - 1;
      ids.push_back(b);
      if (b == static_cast<int>(sizes.size())) sizes.push_back(0);
      ++sizes[b];
    }
  }
  return Partition::from_block_ids(ids);
}

Partition sample_split(const GrowthModel& m, int n, Rng& rng) {
  if (m.kind() == ModelKind::FromKappa) {
    auto k = m.kappa()->kind();
    if (k != DislocationMeasure::Kind::BrownianPaintbox) return m.kappa()->sample_split(n, rng);
  }
  return sample_split_chain(m, n, rng);
}

FirstBlockSampler::FirstBlockSampler(const GrowthModel& m, int nmax) {
  if (!m.size_based()) throw SpecError("first-block tables need a size-based model");
  g0_.assign(static_cast<size_t>(nmax + 1), 0.0);
  r_.assign(static_cast<size_t>(nmax + 1), 0.0);
  const double a = m.alpha().get_d(), b = m.second().get_d();
  // After a reset at level L the first block has L labels and the rest one label.
  // Conditioned on no later reset, the first block grows as a two-colour Polya urn
  // with weights (L - c0, urn_shift_).
  switch (m.kind()) {
    case ModelKind::AlphaTheta:
      c0_ = 1 - b;
      urn_shift_ = 1 - a;
      break;
    case ModelKind::PoissonDirichlet:
      c0_ = a;
      urn_shift_ = 1 + b + a;
      break;
    default:
      c0_ = a;
      urn_shift_ = 1 - b;
      break;
  }
  lam_.assign(static_cast<size_t>(nmax + 1), 0.0);
  if (nmax >= 2) lam_[2] = 1.0;
  for (int j = 2; j <= nmax; ++j) {
    g0_[j] = m.g0<double>(j);
    // g_first(b, j) is affine in b; recover the slope from two evaluations
    r_[j] = m.g_first(2, j) - m.g_first(1, j);
    if (j < nmax) lam_[j + 1] = lam_[j] / (1.0 - g0_[j]);
  }
}

long FirstBlockSampler::sample(int n, Rng& rng) const {
  if (n < 2) return n;
  if (n > nmax()) throw SpecError("first-block sampler built for smaller n");
  // P(last reset < j) = lambda_j / lambda_n
  const double u = rng.uniform() * lam_[n];
  long L = std::upper_bound(lam_.begin() + 1, lam_.begin() + n, u) - lam_.begin() - 1;
  if (L < 1) L = 1;
  const long steps = n - L - 1;
  if (steps <= 0) return L;
  const double x = static_cast<double>(L) - c0_, y = urn_shift_;
  double p;
  if (x <= 0) {
    p = 0;
  } else if (y <= 0) {
    p = 1;
  } else {
    double gx = std::gamma_distribution<double>(x)(rng.engine());
    double gy = std::gamma_distribution<double>(y)(rng.engine());
    p = gx / (gx + gy);
  }
  return L + std::binomial_distribution<long>(steps, p)(rng.engine());
}

long FirstBlockSampler::sample_chain(int n, Rng& rng) const {
  if (n < 2) return n;
  if (n > nmax()) throw SpecError("first-block sampler built for smaller n");
  long b = 1;
  for (int j = 2; j < n; ++j) {
    double u = rng.uniform();
    double g0 = g0_[j];
    if (u < g0) {
      b = j;
    } else if (u < g0 + (static_cast<double>(b) - c0_) * r_[j]) {
      ++b;
    }
  }
  return b;
}

std::vector<double> FirstBlockSampler::law(int n) const {
  if (n > nmax()) throw SpecError("first-block sampler built for smaller n");
  std::vector<double> p(static_cast<size_t>(n + 1), 0.0);
  if (n < 2) return p;
  p[1] = 1.0;  // level 2: ({1},{2})
  for (int j = 2; j < n; ++j) {
    std::vector<double> q(static_cast<size_t>(n + 1), 0.0);
    q[j] = g0_[j];
    for (int b = 1; b < j; ++b) {
      if (p[b] == 0) continue;
      double up = (b - c0_) * r_[j];
      q[b + 1] += p[b] * up;
      q[b] += p[b] * (1 - g0_[j] - up);
    }
    p.swap(q);
  }
  return p;
}

}  // namespace rtg
