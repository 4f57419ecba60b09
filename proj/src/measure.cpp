#include "rtg/measure.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "rtg/error.hpp"
#include "rtg/growth.hpp"
#include "rtg/laws.hpp"
#include "rtg/random.hpp"

namespace rtg {

namespace {

template <class T>
T rising(const T& x, int k) {
  T r = 1;
  for (int i = 0; i < k; ++i) r *= x + T(i);
  return r;
}

double log_rising(double x, int k) {
  if (k <= 0) return 0.0;
  if (k < 64) {
    double r = 0;
    for (int i = 0; i < k; ++i) r += std::log(x + i);
    return r;
  }
  return std::lgamma(x + k) - std::lgamma(x);
}

// Integrates f(u, 1-u) over u in (lo, hi), passing both coordinates accurately
// near the endpoints (the complement is carried through the tanh-sinh map).
template <class F>
double integrate_unit(F f, double lo = 0.0, double hi = 1.0) {
  static thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  auto g = [&](double t, double tc) {
    double x = mid + half * t;
    double u = x, v = 1.0 - x;
    if (t < -0.5) {
      double dl = half * (-tc);  // x - lo
      if (lo == 0.0) u = dl;
      v = (1.0 - lo) - dl;
    } else if (t > 0.5) {
      double dh = half * tc;  // hi - x
      if (hi == 1.0) v = dh;
      u = hi - dh;
    }
    if (u <= 0.0 || v <= 0.0) return 0.0;
    return f(u, v);
  };
  double err = 0;
  return half * ts.integrate(g, 1e-11, &err);
}

// 1 - u^s computed without cancellation near u = 1 (v = 1 - u)
double one_minus_pow(double u, double v, double s) {
  double lu = v < 0.5 ? std::log1p(-v) : std::log(u);
  return -std::expm1(s * lu);
}

}  // namespace

double PowerTail::weight(int j) const { return gamma * std::pow(static_cast<double>(j), gamma - 1.0); }

std::pair<double, double> PowerTail::deficit_sum_bounds(long from) const {
  // sum_{j >= from} gamma j^{gamma-2}: decreasing summand, bracket by integrals
  double a = static_cast<double>(from);
  double lo = gamma * std::pow(a, gamma - 1.0) / (1.0 - gamma);
  double hi = gamma * std::pow(a - 1.0, gamma - 1.0) / (1.0 - gamma);
  if (from <= 1) hi = INFINITY;
  return {lo, hi};
}

template <class T>
T paintbox_cylinder(const std::vector<T>& s, const Partition& pi) {
  const int m = static_cast<int>(s.size());
  if (m > 20) throw SpecError("paintbox cylinders support at most 20 colours");
  T dust = 1;
  for (auto& x : s) dust -= x;
  const auto sizes = pi.sizes();
  const int k = static_cast<int>(sizes.size());
  std::map<std::pair<int, unsigned>, T> memo;
  std::function<T(int, unsigned)> rec = [&](int i, unsigned used) -> T {
    if (i == k) return T(1);
    auto key = std::make_pair(i, used);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    T total = 0;
    for (int c = 0; c < m; ++c) {
      if (used & (1u << c)) continue;
      T pw = 1;
      for (int r = 0; r < sizes[i]; ++r) pw *= s[c];
      if (pw == T(0)) continue;
      total += pw * rec(i + 1, used | (1u << c));
    }
    if (sizes[i] == 1 && dust != T(0)) total += dust * rec(i + 1, used);
    memo.emplace(key, total);
    return total;
  };
  return rec(0, 0u);
}

template double paintbox_cylinder<double>(const std::vector<double>&, const Partition&);
template Rational paintbox_cylinder<Rational>(const std::vector<Rational>&, const Partition&);

DislocationMeasure DislocationMeasure::finite_atomic(std::vector<Atom> atoms, std::optional<PowerTail> tail) {
  DislocationMeasure d;
  d.kind_ = Kind::FiniteAtomic;
  for (auto& a : atoms) {
    if (!a.family) throw SpecError("atom without a family");
    if (a.exact) a.weight = a.exact->get_d();
    if (!(a.weight >= 0) || !std::isfinite(a.weight)) throw SpecError("atom weights must be finite and non-negative");
    a.onset = a.family->first_split_level();
    if (!a.exact) d.all_exact_ = false;
  }
  std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.onset < y.onset; });
  d.atoms_ = std::move(atoms);
  d.prefix_.assign(d.atoms_.size() + 1, 0.0);
  for (size_t i = 0; i < d.atoms_.size(); ++i) d.prefix_[i + 1] = d.prefix_[i] + d.atoms_[i].weight;
  if (d.all_exact_) {
    d.prefix_exact_.assign(d.atoms_.size() + 1, Rational(0));
    for (size_t i = 0; i < d.atoms_.size(); ++i) d.prefix_exact_[i + 1] = d.prefix_exact_[i] + *d.atoms_[i].exact;
  }
  if (tail) {
    if (!(tail->gamma > 0 && tail->gamma < 1) || tail->first < 2) throw SpecError("power tail needs 0 < gamma < 1");
    d.all_exact_ = false;
  }
  d.tail_ = tail;
  return d;
}

DislocationMeasure DislocationMeasure::ordered_beta(const Rational& alpha, const Rational& theta) {
  if (alpha <= 0 || alpha >= 1) throw SpecError("ordered beta mixture needs 0 < alpha < 1");
  if (theta <= 0) throw SpecError("ordered beta mixture needs theta > 0");
  DislocationMeasure d;
  d.kind_ = Kind::OrderedBeta;
  d.a_ = alpha;
  d.t_ = theta;
  d.model_ = std::make_shared<GrowthModel>(GrowthModel::alpha_theta(alpha, theta));
  return d;
}

DislocationMeasure DislocationMeasure::paintbox_atoms(std::vector<PaintboxAtom> atoms) {
  DislocationMeasure d;
  d.kind_ = Kind::PaintboxAtoms;
  for (auto& a : atoms) {
    Rational total = 0;
    for (size_t i = 0; i < a.s.size(); ++i) {
      if (a.s[i] < 0) throw SpecError("paintbox frequencies must be non-negative");
      if (i > 0 && a.s[i] > a.s[i - 1]) throw SpecError("paintbox frequencies must be ranked");
      total += a.s[i];
    }
    if (total > 1) throw SpecError("paintbox frequencies sum above 1");
    if (a.weight < 0) throw SpecError("paintbox weights must be non-negative");
    if (!a.s.empty() && a.s[0] == 1) throw SpecError("the trivial paintbox (1,0,...) carries no splits");
  }
  d.pb_ = std::move(atoms);
  return d;
}

DislocationMeasure DislocationMeasure::brownian_paintbox(double scale) {
  if (!(scale > 0)) throw SpecError("scale must be positive");
  DislocationMeasure d;
  d.kind_ = Kind::BrownianPaintbox;
  d.scale_d_ = scale;
  d.scale_exact_ = false;
  return d;
}

DislocationMeasure DislocationMeasure::from_growth_rule(const GrowthModel& model, const Rational& lambda2) {
  if (lambda2 <= 0) throw SpecError("lambda_2 must be positive");
  DislocationMeasure d;
  d.kind_ = Kind::FromGrowthRule;
  d.model_ = std::make_shared<GrowthModel>(model);
  d.lambda2_ = lambda2;
  return d;
}

DislocationMeasure DislocationMeasure::scaled(const Rational& c) const {
  if (c <= 0) throw SpecError("scale factor must be positive");
  DislocationMeasure d = *this;
  d.scale_ *= c;
  d.scale_d_ *= c.get_d();
  return d;
}

DislocationMeasure DislocationMeasure::scaled(double c) const {
  if (!(c > 0)) throw SpecError("scale factor must be positive");
  DislocationMeasure d = *this;
  d.scale_d_ *= c;
  d.scale_exact_ = false;
  return d;
}

DislocationMeasure DislocationMeasure::normalized() const {
  Partition p12(2, {{1}, {2}});
  if (supports_exact()) return scaled(Rational(1 / cylinder<Rational>(p12)));
  return scaled(1.0 / cylinder<double>(p12));
}

bool DislocationMeasure::supports_exact() const {
  if (!scale_exact_) return false;
  switch (kind_) {
    case Kind::FiniteAtomic: return all_exact_;
    case Kind::OrderedBeta: return true;
    case Kind::PaintboxAtoms: return true;
    case Kind::BrownianPaintbox: return false;
    case Kind::FromGrowthRule: return model_->exact_capable();
  }
  return false;
}

int DislocationMeasure::max_level() const {
  if (kind_ == Kind::FiniteAtomic && tail_) return tail_->first - 1;
  return std::numeric_limits<int>::max();
}

std::string DislocationMeasure::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::FiniteAtomic:
      os << "finite_atomic(" << atoms_.size() << " atoms";
      if (tail_) os << ", power tail gamma=" << tail_->gamma << " from j=" << tail_->first;
      os << ")";
      break;
    case Kind::OrderedBeta: os << "ordered_beta(alpha=" << a_ << ", theta=" << t_ << ")"; break;
    case Kind::PaintboxAtoms: os << "paintbox_mixture(" << pb_.size() << " atoms)"; break;
    case Kind::BrownianPaintbox: os << "brownian_paintbox"; break;
    case Kind::FromGrowthRule: os << "from_growth_rule(" << model_->describe() << ", lambda2=" << lambda2_ << ")"; break;
  }
  if (scale_exact_ ? scale_ != 1 : scale_d_ != 1.0) os << " x " << (scale_exact_ ? scale_.get_str() : std::to_string(scale_d_));
  return os.str();
}

double DislocationMeasure::raw_scale() const {
  if (kind_ != Kind::OrderedBeta) return 1.0;
  double a = a_.get_d(), t = t_.get_d();
  return std::exp(std::lgamma(t + 1) + std::lgamma(1 - a) - std::lgamma(t + 1 - a));
}

template <class T>
T DislocationMeasure::scale_as() const {
  if constexpr (std::is_same_v<T, Rational>) {
    if (!scale_exact_) throw SpecError("exact mode needs a rational scale");
    return scale_;
  } else {
    return scale_d_;
  }
}

template <class T>
T DislocationMeasure::raw_cylinder(const Partition& pi) const {
  const int n = pi.n();
  if (pi.is_trivial()) throw SpecError("kappa cylinders are used for non-trivial partitions only");
  switch (kind_) {
    case Kind::FiniteAtomic: {
      if (n > max_level()) throw SpecError("level " + std::to_string(n) + " is beyond the listed atoms");
      if constexpr (std::is_same_v<T, Rational>) {
        if (!all_exact_) throw SpecError("exact mode needs rational atom weights");
      }
      T total = 0;
      for (const auto& a : atoms_) {
        if (a.onset > n) break;
        if (a.family->restrict_to(n) == pi) {
          if constexpr (std::is_same_v<T, Rational>) {
            total += *a.exact;
          } else {
            total += a.weight;
          }
        }
      }
      return total;
    }
    case Kind::OrderedBeta: {
      if (pi.num_blocks() != 2) return T(0);
      const int a = pi.block_size(0), b = pi.block_size(1);
      const bool two_in_first = pi.block_of(2) == 0;
      if constexpr (std::is_same_v<T, Rational>) {
        Rational term = two_in_first ? Rational(a_ * rising<Rational>(t_ + 1, a - 2)) : rising<Rational>(t_, a - 1);
        return T(term * rising<Rational>(1 - a_, b - 1) / rising<Rational>(t_ + 1 - a_, n - 2));
      } else {
        double al = a_.get_d(), th = t_.get_d();
        double lt = two_in_first ? std::log(al) + log_rising(th + 1, a - 2) : log_rising(th, a - 1);
        return std::exp(lt + log_rising(1 - al, b - 1) - log_rising(th + 1 - al, n - 2));
      }
    }
    case Kind::PaintboxAtoms: {
      T total = 0;
      for (const auto& at : pb_) {
        std::vector<T> s;
        for (auto& x : at.s) s.push_back(from_rational<T>(x));
        total += from_rational<T>(at.weight) * paintbox_cylinder<T>(s, pi);
      }
      return total;
    }
    case Kind::BrownianPaintbox: {
      if constexpr (std::is_same_v<T, Rational>) {
        throw SpecError("the Brownian paintbox has no exact cylinders");
      } else {
        if (pi.num_blocks() != 2) return 0.0;
        const int a = pi.block_size(0), b = pi.block_size(1);
        const double c = std::sqrt(2.0 / std::numbers::pi);
        return integrate_unit(
            [&](double x, double y) {
              return c * (std::pow(x, a) * std::pow(y, b) + std::pow(x, b) * std::pow(y, a)) * std::pow(x * y, -1.5);
            },
            0.5, 1.0);
      }
    }
    case Kind::FromGrowthRule: return kappa_cylinder<T>(*model_, from_rational<T>(lambda2_), pi);
  }
  return T(0);
}

template <class T>
T DislocationMeasure::raw_lambda(int n) const {
  if (n <= 1) return T(0);
  switch (kind_) {
    case Kind::FiniteAtomic: {
      if (n > max_level()) throw SpecError("level " + std::to_string(n) + " is beyond the listed atoms");
      size_t idx = static_cast<size_t>(
          std::upper_bound(atoms_.begin(), atoms_.end(), n, [](int v, const Atom& a) { return v < a.onset; }) -
          atoms_.begin());
      if constexpr (std::is_same_v<T, Rational>) {
        if (!all_exact_) throw SpecError("exact mode needs rational atom weights");
        return prefix_exact_[idx];
      } else {
        return prefix_[idx];
      }
    }
    case Kind::OrderedBeta: {
      if constexpr (std::is_same_v<T, Rational>) {
        // sum over two-block partitions grouped by (#B_1, side of label 2)
        Rational total = 0;
        mpz_class binom;
        for (int a = 1; a < n; ++a) {
          Partition p1 = Partition::from_block_ids([&] {
            std::vector<int> ids(static_cast<size_t>(n), 1);
            for (int i = 0; i < a; ++i) ids[i] = 0;
            return ids;
          }());
          // 2 in B_2: choose the other a-1 members of B_1 among labels 3..n
          mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n - 2), static_cast<unsigned long>(a - 1));
          std::vector<int> ids2(static_cast<size_t>(n), 1);
          ids2[0] = 0;
          for (int i = 2; i < a + 1; ++i) ids2[i] = 0;
          total += Rational(binom) * raw_cylinder<Rational>(Partition::from_block_ids(ids2));
          if (a >= 2) {
            mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n - 2), static_cast<unsigned long>(a - 2));
            total += Rational(binom) * raw_cylinder<Rational>(p1);
          }
        }
        return total;
      } else {
        double al = a_.get_d(), th = t_.get_d();
        return std::exp(log_rising(th + 1, n - 2) - log_rising(th + 1 - al, n - 2));
      }
    }
    case Kind::PaintboxAtoms: {
      T total = 0;
      for (const auto& at : pb_) {
        T stay = 0;
        for (auto& x : at.s) {
          T p = 1;
          for (int r = 0; r < n; ++r) p *= from_rational<T>(x);
          stay += p;
        }
        total += from_rational<T>(at.weight) * (T(1) - stay);
      }
      return total;
    }
    case Kind::BrownianPaintbox: {
      if constexpr (std::is_same_v<T, Rational>) {
        throw SpecError("the Brownian paintbox has no exact rates");
      } else {
        const double c = std::sqrt(2.0 / std::numbers::pi);
        return integrate_unit(
            [&](double x, double y) {
              return c * (one_minus_pow(x, y, n) - std::pow(y, n)) * std::pow(x * y, -1.5);
            },
            0.5, 1.0);
      }
    }
    case Kind::FromGrowthRule: return lambda_seq<T>(*model_, from_rational<T>(lambda2_), n)[n];
  }
  return T(0);
}

template <class T>
T DislocationMeasure::cylinder(const Partition& pi) const {
  return T(scale_as<T>() * raw_cylinder<T>(pi));
}

template <class T>
T DislocationMeasure::lambda(int n) const {
  return T(scale_as<T>() * raw_lambda<T>(n));
}

template double DislocationMeasure::cylinder<double>(const Partition&) const;
template Rational DislocationMeasure::cylinder<Rational>(const Partition&) const;
template double DislocationMeasure::lambda<double>(int) const;
template Rational DislocationMeasure::lambda<Rational>(int) const;

double DislocationMeasure::raw_psi(double s) const {
  if (s < 0) throw SpecError("Laplace exponents are evaluated at s >= 0");
  if (s == 0) return 0.0;
  switch (kind_) {
    case Kind::FiniteAtomic: {
      double total = 0;
      for (const auto& a : atoms_) {
        double f1 = a.family->limit_frequencies().front();
        total += a.weight * (f1 <= 0 ? 1.0 : one_minus_pow(f1, 1.0 - f1, s));
      }
      if (tail_) {
        const long J = tail_->first + 1000000L;
        for (long j = tail_->first; j < J; ++j) {
          double y = 1.0 / static_cast<double>(j);
          total += tail_->weight(static_cast<int>(j)) * one_minus_pow(1 - y, y, s);
        }
        total += s * tail_->deficit_sum_bounds(J).first;
      }
      return total;
    }
    case Kind::OrderedBeta: {
      double al = a_.get_d(), th = t_.get_d();
      double v = integrate_unit([&](double u, double y) {
        // divide before the power so tiny y cannot overflow
        return one_minus_pow(u, y, s) / y * (al * u + th * y) * std::pow(u, th - 1) * std::pow(y, -al);
      });
      return v / raw_scale();
    }
    case Kind::PaintboxAtoms:
    case Kind::BrownianPaintbox: return raw_psi_uniform(s);
    case Kind::FromGrowthRule:
      if (model_->kind() == ModelKind::AlphaTheta && model_->alpha() > 0 && model_->alpha() < 1 && model_->second() > 0)
        return lambda2_.get_d() * ordered_beta(model_->alpha(), model_->second()).laplace_exponent(s);
      break;
  }
  throw SpecError("no Laplace exponent available for " + describe());
}

double DislocationMeasure::raw_psi_uniform(double s) const {
  if (s < 0) throw SpecError("Laplace exponents are evaluated at s >= 0");
  if (s == 0 && kind_ != Kind::FiniteAtomic) return 0.0;
  const double p = s + 1;
  switch (kind_) {
    case Kind::FiniteAtomic: {
      double total = 0;
      for (const auto& a : atoms_) {
        auto f = a.family->limit_frequencies();
        double sum = 0;
        for (double x : f) sum += x > 0 ? std::pow(x, p) : 0.0;
        total += a.weight * (1 - sum);
      }
      if (tail_) {
        const long J = tail_->first + 1000000L;
        for (long j = tail_->first; j < J; ++j) {
          double y = 1.0 / static_cast<double>(j);
          total += tail_->weight(static_cast<int>(j)) * (one_minus_pow(1 - y, y, p) - std::pow(y, p));
        }
        total += p * tail_->deficit_sum_bounds(J).first;
      }
      return total;
    }
    case Kind::OrderedBeta: {
      double al = a_.get_d(), th = t_.get_d();
      double v = integrate_unit([&](double u, double y) {
        return (one_minus_pow(u, y, p) - std::pow(y, p)) / y * (al * u + th * y) * std::pow(u, th - 1) * std::pow(y, -al);
      });
      return v / raw_scale();
    }
    case Kind::PaintboxAtoms: {
      double total = 0;
      for (const auto& at : pb_) {
        double sum = 0;
        for (auto& x : at.s) sum += std::pow(x.get_d(), p);
        total += at.weight.get_d() * (1 - sum);
      }
      return total;
    }
    case Kind::BrownianPaintbox: {
      const double c = std::sqrt(2.0 / std::numbers::pi);
      return integrate_unit(
          [&](double x, double y) { return c * (one_minus_pow(x, y, p) - std::pow(y, p)) * std::pow(x * y, -1.5); },
          0.5, 1.0);
    }
    case Kind::FromGrowthRule:
      if (model_->kind() == ModelKind::AlphaTheta && model_->alpha() > 0 && model_->alpha() < 1 && model_->second() > 0)
        return lambda2_.get_d() * ordered_beta(model_->alpha(), model_->second()).uniform_leaf_exponent(s);
      break;
  }
  throw SpecError("no uniform-leaf exponent available for " + describe());
}

double DislocationMeasure::laplace_exponent(double s) const { return scale_d_ * raw_psi(s); }
double DislocationMeasure::uniform_leaf_exponent(double s) const { return scale_d_ * raw_psi_uniform(s); }

Partition DislocationMeasure::sample_split(int n, Rng& rng) const {
  if (n < 2) throw SpecError("a split needs n >= 2");
  switch (kind_) {
    case Kind::FiniteAtomic: {
      if (n > max_level()) throw SpecError("level " + std::to_string(n) + " is beyond the listed atoms");
      size_t idx = static_cast<size_t>(
          std::upper_bound(atoms_.begin(), atoms_.end(), n, [](int v, const Atom& a) { return v < a.onset; }) -
          atoms_.begin());
      double w = prefix_[idx];
      if (!(w > 0)) throw SpecError("no atom splits [" + std::to_string(n) + "]");
      double u = rng.uniform() * w;
      size_t i = static_cast<size_t>(std::upper_bound(prefix_.begin() + 1, prefix_.begin() + 1 + idx, u) -
                                     (prefix_.begin() + 1));
      if (i >= idx) i = idx - 1;
      return atoms_[i].family->restrict_to(n);
    }
    case Kind::OrderedBeta:
    case Kind::FromGrowthRule: return sample_split_chain(*model_, n, rng);
    case Kind::PaintboxAtoms: {
      std::vector<double> w;
      for (auto& a : pb_) w.push_back(a.weight.get_d());
      for (int tries = 0; tries < 1000000; ++tries) {
        const auto& at = pb_[rng.categorical(w)];
        std::vector<double> s;
        for (auto& x : at.s) s.push_back(x.get_d());
        Partition p = sample_paintbox(s, n, rng);
        if (!p.is_trivial()) return p;
      }
      throw SpecError("paintbox sampler: no split after 10^6 proposals");
    }
    case Kind::BrownianPaintbox: {
      auto m = GrowthModel::from_kappa(std::make_shared<DislocationMeasure>(*this));
      return sample_split_chain(m, n, rng);
    }
  }
  throw SpecError("unsupported measure for sampling");
}

long DislocationMeasure::sample_first_block(int n, Rng& rng) const {
  if (kind_ == Kind::FiniteAtomic) {
    if (n > max_level()) throw SpecError("level " + std::to_string(n) + " is beyond the listed atoms");
    size_t idx = static_cast<size_t>(
        std::upper_bound(atoms_.begin(), atoms_.end(), n, [](int v, const Atom& a) { return v < a.onset; }) -
        atoms_.begin());
    double w = prefix_[idx];
    if (!(w > 0)) throw SpecError("no atom splits [" + std::to_string(n) + "]");
    double u = rng.uniform() * w;
    size_t i = static_cast<size_t>(std::upper_bound(prefix_.begin() + 1, prefix_.begin() + 1 + idx, u) -
                                   (prefix_.begin() + 1));
    if (i >= idx) i = idx - 1;
    return atoms_[i].family->first_block_count(n);
  }
  return sample_split(n, rng).block_size(0);
}

}  // namespace rtg
