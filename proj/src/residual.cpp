#include "rtg/residual.hpp"

#include <cmath>

#include "rtg/error.hpp"
#include "rtg/laws.hpp"

namespace rtg {

std::vector<long> composition_of(const MassChainPath& p) {
  std::vector<long> parts;
  const auto& v = p.values;
  for (size_t m = 0; m + 2 < v.size(); ++m) parts.push_back(v[m] - v[m + 1]);
  parts.push_back(1);
  return parts;
}

MassChainPath path_of_composition(const std::vector<long>& parts) {
  long n = 0;
  for (long x : parts) {
    if (x <= 0) throw SpecError("composition parts must be positive");
    n += x;
  }
  if (parts.empty() || parts.back() != 1) throw SpecError("a residual composition ends with the part 1");
  MassChainPath p;
  p.values.push_back(n);
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    n -= parts[i];
    p.values.push_back(n);
  }
  p.values.push_back(0);
  return p;
}

MassChainPath residual_chain(const LabelledTree& t) {
  MassChainPath p;
  int v = t.top();
  p.values.push_back(t.node(v).leaves);
  while (!t.is_leaf(v)) {
    v = t.node(v).children.front();  // the child holding label 1
    p.values.push_back(t.node(v).leaves);
  }
  p.values.push_back(0);
  return p;
}

ResidualSampler::ResidualSampler(const GrowthModel& m, int nmax)
    : fb_(std::make_shared<FirstBlockSampler>(m, nmax)), nmax_(nmax) {
  lam_ = lambda_seq<double>(m, 1.0, nmax);
}

ResidualSampler::ResidualSampler(std::shared_ptr<const DislocationMeasure> d) : d_(std::move(d)) {
  nmax_ = d_->max_level();
}

ResidualSampler::ResidualSampler(std::shared_ptr<const IndexedExample> ex) : ex_(std::move(ex)) {
  nmax_ = ex_->horizon;
}

long ResidualSampler::first_step(long n, Rng& rng) const {
  if (n < 2) return 0;
  if (n > nmax_) throw SpecError("residual chain requested beyond n = " + std::to_string(nmax_));
  if (fb_) return fb_->sample(static_cast<int>(n), rng);
  if (ex_) return ex_->sample_first_block(n, rng);
  return d_->sample_first_block(static_cast<int>(n), rng);
}

MassChainPath ResidualSampler::sample(long n, Rng& rng) const {
  if (n < 1) throw SpecError("n must be positive");
  MassChainPath p;
  p.values.push_back(n);
  while (n > 1) {
    n = first_step(n, rng);
    p.values.push_back(n);
  }
  p.values.push_back(0);
  return p;
}

double ResidualSampler::lambda(long n) const {
  if (n > nmax_) throw SpecError("lambda requested beyond n = " + std::to_string(nmax_));
  if (fb_) return lam_[static_cast<size_t>(n)];
  if (ex_) return ex_->lambda(n);
  return d_->lambda<double>(static_cast<int>(n));
}

std::vector<Rational> first_step_law_exact(const GrowthModel& m, int n, bool force) {
  std::vector<Rational> out(static_cast<size_t>(n + 1), Rational(0));
  if (n == 1) return out;
  for (auto& [pi, p] : splitting_distribution<Rational>(m, n, force)) out[pi.block_size(0)] += p;
  return out;
}

std::vector<double> first_step_law(const GrowthModel& m, int n) {
  if (m.size_based()) return FirstBlockSampler(m, std::max(n, 2)).law(n);
  std::vector<double> out(static_cast<size_t>(n + 1), 0.0);
  if (n == 1) return out;
  for (auto& [pi, p] : splitting_distribution<double>(m, n)) out[pi.block_size(0)] += p;
  return out;
}

template <class T>
std::vector<T> first_step_law_kappa(const DislocationMeasure& d, int n, bool force) {
  std::vector<T> out(static_cast<size_t>(n + 1), T(0));
  if (n < 2) return out;
  for (auto& pi : nontrivial_partitions(n, force)) out[pi.block_size(0)] += d.cylinder<T>(pi);
  T lam = d.lambda<T>(n);
  for (auto& x : out) x = T(x / lam);
  return out;
}

template std::vector<double> first_step_law_kappa<double>(const DislocationMeasure&, int, bool);
template std::vector<Rational> first_step_law_kappa<Rational>(const DislocationMeasure&, int, bool);

double scaled_value(const MassChainPath& p, double lambda_n, double t) {
  long m = static_cast<long>(std::floor(lambda_n * t));
  return static_cast<double>(p.at(m)) / static_cast<double>(p.values.front());
}

}  // namespace rtg
