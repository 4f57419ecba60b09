#include "rtg/laws.hpp"

#include <algorithm>
#include <functional>

#include "rtg/error.hpp"

namespace rtg {

template <class T>
T splitting_prob(const GrowthModel& m, const Partition& pi) {
  const int n = pi.n();
  if (pi.is_trivial()) throw SpecError("splitting probabilities are defined for non-trivial partitions");
  const auto& rgs = pi.rgs();
  // least element of block 2
  int mb2 = 0;
  while (rgs[mb2] == 0) ++mb2;
  mb2 += 1;
  T p = m.g0<T>(mb2 - 1);
  Partition cur = pi.restrict_to(mb2);
  for (int j = mb2; j < n; ++j) {
    auto g = m.growth_probs<T>(cur);
    int idx = rgs[j] + 1;  // block of label j+1, 1-based
    p *= g[idx];
    if (p == T(0)) return p;
    cur = cur.extended(rgs[j]);
  }
  return p;
}

template <class T>
std::vector<std::pair<Partition, T>> splitting_distribution(const GrowthModel& m, int n, bool force) {
  std::vector<std::pair<Partition, T>> out;
  for (auto& pi : nontrivial_partitions(n, force)) {
    T p = splitting_prob<T>(m, pi);
    out.emplace_back(std::move(pi), std::move(p));
  }
  return out;
}

template <class T>
T tree_prob(const GrowthModel& m, const LabelledTree& t) {
  T p = 1;
  for (int v = 1; v < t.node_count(); ++v) {
    if (t.node(v).children.empty()) continue;
    Partition split = relabel_increasing(t.child_label_sets(v));
    p *= splitting_prob<T>(m, split);
    if (p == T(0)) break;
  }
  return p;
}

template <class T>
std::vector<T> lambda_seq(const GrowthModel& m, const T& lambda2, int nmax) {
  std::vector<T> out(static_cast<size_t>(std::max(nmax, 2) + 1), T(0));
  out[2] = lambda2;
  for (int n = 2; n < nmax; ++n) out[n + 1] = out[n] / (T(1) - m.g0<T>(n));
  out.resize(static_cast<size_t>(nmax + 1));
  return out;
}

template <class T>
T kappa_cylinder(const GrowthModel& m, const T& lambda2, const Partition& pi) {
  auto lam = lambda_seq<T>(m, lambda2, pi.n());
  return lam[pi.n()] * splitting_prob<T>(m, pi);
}

template <class T>
std::map<std::vector<int>, T> unlabelled_split(const GrowthModel& m, int n, bool force) {
  std::map<std::vector<int>, T> out;
  for (auto& [pi, p] : splitting_distribution<T>(m, n, force)) {
    auto sz = pi.sizes();
    std::sort(sz.begin(), sz.end(), std::greater<>());
    auto it = out.find(sz);
    if (it == out.end())
      out.emplace(std::move(sz), p);
    else
      it->second += p;
  }
  return out;
}

#define RTG_INST(T)                                                                                     \
  template T splitting_prob<T>(const GrowthModel&, const Partition&);                                  \
  template std::vector<std::pair<Partition, T>> splitting_distribution<T>(const GrowthModel&, int, bool); \
  template T tree_prob<T>(const GrowthModel&, const LabelledTree&);                                    \
  template std::vector<T> lambda_seq<T>(const GrowthModel&, const T&, int);                            \
  template T kappa_cylinder<T>(const GrowthModel&, const T&, const Partition&);                        \
  template std::map<std::vector<int>, T> unlabelled_split<T>(const GrowthModel&, int, bool);
RTG_INST(double)
RTG_INST(Rational)
#undef RTG_INST

}  // namespace rtg
