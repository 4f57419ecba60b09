#include "rtg/fragsim.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "rtg/error.hpp"
#include "rtg/growth.hpp"
#include "rtg/laws.hpp"

namespace rtg {

namespace {

void build_block(std::vector<LabelledTree::Node>& nodes, int parent,
                 const std::vector<int>& labels, const GrowthModel& m, const std::vector<double>& lam,
                 TimedGenealogy& out, Rng& rng) {
  const int id = static_cast<int>(nodes.size());
  nodes.emplace_back();
  nodes[id].parent = parent;
  nodes[parent].children.push_back(id);
  const int size = static_cast<int>(labels.size());
  if (size == 1) {
    nodes[id].label = labels[0];
    nodes[id].length = 0.0;
    return;
  }
  const double hold = rng.exponential(lam[size]);
  nodes[id].length = hold;
  out.holds.emplace_back(size, hold);
  Partition split = sample_split(m, size, rng);
  for (const auto& block : split.blocks()) {
    std::vector<int> sub;
    sub.reserve(block.size());
    for (int i : block) sub.push_back(labels[i - 1]);
    build_block(nodes, id, sub, m, lam, out, rng);
  }
}

}  // namespace

TimedGenealogy ctmc_genealogy(const GrowthModel& m, double lambda2, int n, Rng& rng) {
  if (n < 1) throw SpecError("n must be positive");
  if (!(lambda2 > 0)) throw SpecError("lambda2 must be positive");
  TimedGenealogy out;
  auto lam = lambda_seq<double>(m, lambda2, std::max(n, 2));
  auto& nodes = out.tree.raw_nodes();
  nodes.clear();
  nodes.emplace_back();  // root
  std::vector<int> labels(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) labels[i] = i + 1;
  build_block(nodes, 0, labels, m, lam, out, rng);
  out.tree.recompute();
  return out;
}

AtomNu::AtomNu(double s1, double w) : s1_(s1), w_(w) {
  if (!(s1 >= 0.5 && s1 < 1) || !(w > 0)) throw SpecError("atom dislocation needs s1 in [1/2,1) and w > 0");
}

namespace {
// int_{1/2}^x (s(1-s))^{-3/2} ds
double brownian_z(double x) { return 2 * (2 * x - 1) / std::sqrt(x * (1 - x)); }
}  // namespace

BrownianNu::BrownianNu(double eps, double scale) : eps_(eps), scale_(scale) {
  if (!(eps > 0 && eps < 0.5)) throw SpecError("truncation eps must lie in (0, 1/2)");
  if (!(scale > 0)) throw SpecError("scale must be positive");
  zmax_ = brownian_z(1 - eps);
  total_ = scale * std::sqrt(2 / std::numbers::pi) * zmax_;
}

double BrownianNu::sample_s1(Rng& rng) const {
  double z = rng.uniform() * zmax_;
  double d = z / std::sqrt(16 + z * z);
  return 0.5 * (1 + d);
}

double BrownianNu::mean_of(const std::function<double(double)>& f) const {
  boost::math::quadrature::tanh_sinh<double> ts;
  // substitute s = s(z): ds = (s(1-s))^{3/2} dz, so the density becomes uniform in z
  double v = ts.integrate(
      [&](double z) {
        double d = z / std::sqrt(16 + z * z);
        return f(0.5 * (1 + d));
      },
      0.0, zmax_, 1e-12);
  return v / zmax_;
}

double BrownianNu::cut_mass_loss() const {
  // int_0^eps v^{-1/2} (1-v)^{-3/2} dv = 2 sqrt(eps / (1 - eps))
  return scale_ * std::sqrt(2 / std::numbers::pi) * 2 * std::sqrt(eps_ / (1 - eps_));
}

namespace {

// Waiting time to the next split of a block of mass x and its mass just before it.
std::pair<double, double> next_split(double x, double gamma, double total, double e, Rng& rng) {
  if (e <= 0) return {rng.exponential(std::pow(x, -gamma) * total), x};
  // hazard total / x(t)^gamma with x(t)^gamma = x^gamma - gamma e t
  const double E = rng.exponential(1.0);
  const double xg = std::pow(x, gamma);
  const double decay = std::exp(-gamma * e * E / total);
  const double t = xg / (gamma * e) * (1 - decay);
  return {t, std::pow(xg * decay, 1 / gamma)};
}

}  // namespace

double MassFragTree::height() const {
  if (nodes.empty()) return 0;
  double best = 0;
  std::vector<std::pair<int, double>> stack{{0, 0.0}};
  while (!stack.empty()) {
    auto [v, t] = stack.back();
    stack.pop_back();
    const auto& nd = nodes[v];
    double here = t + nd.hold;
    if (nd.children.empty()) best = std::max(best, here);
    for (int c : nd.children) stack.emplace_back(c, here);
  }
  return best;
}

MassFragTree mass_frag_tree(double gamma, const BinaryNu& nu, double mass_floor, Rng& rng, bool erosion,
                            std::size_t max_nodes) {
  if (!(gamma > 0)) throw SpecError("gamma must be positive");
  if (!(mass_floor > 0 && mass_floor < 1)) throw SpecError("mass floor must lie in (0,1)");
  MassFragTree t;
  t.nodes.push_back({1.0, 0.0, {}});
  std::vector<int> todo{0};
  while (!todo.empty()) {
    int v = todo.back();
    todo.pop_back();
    double x = t.nodes[v].mass;
    if (x < mass_floor) continue;
    auto [hold, xe] = next_split(x, gamma, nu.total(), erosion ? nu.cut_mass_loss() : 0.0, rng);
    t.nodes[v].hold = hold;
    x = xe;
    double s1 = nu.sample_s1(rng);
    if (t.nodes.size() + 2 > max_nodes) throw ResourceError("mass fragmentation tree exceeds the node budget");
    for (double part : {x * s1, x * (1 - s1)}) {
      int c = static_cast<int>(t.nodes.size());
      t.nodes.push_back({part, 0.0, {}});
      t.nodes[v].children.push_back(c);
      todo.push_back(c);
    }
  }
  return t;
}

double mass_frag_height(double gamma, const BinaryNu& nu, double mass_floor, Rng& rng, bool erosion) {
  if (!(gamma > 0)) throw SpecError("gamma must be positive");
  if (!(mass_floor > 0 && mass_floor < 1)) throw SpecError("mass floor must lie in (0,1)");
  double best = 0;
  std::vector<std::pair<double, double>> stack{{1.0, 0.0}};
  const double tot = nu.total();
  const double e = erosion ? nu.cut_mass_loss() : 0.0;
  while (!stack.empty()) {
    auto [x, t] = stack.back();
    stack.pop_back();
    if (x < mass_floor) {
      best = std::max(best, t);
      continue;
    }
    auto [hold, xe] = next_split(x, gamma, tot, e, rng);
    t += hold;
    x = xe;
    double s1 = nu.sample_s1(rng);
    stack.emplace_back(x * (1 - s1), t);
    stack.emplace_back(x * s1, t);
  }
  return best;
}

}  // namespace rtg
