#include "rtg/model.hpp"

#include <cmath>
#include <sstream>

#include "rtg/error.hpp"
#include "rtg/measure.hpp"

namespace rtg {

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Ford: return "ford";
    case ModelKind::AlphaGamma: return "alpha_gamma";
    case ModelKind::AlphaTheta: return "alpha_theta";
    case ModelKind::PoissonDirichlet: return "poisson_dirichlet";
    case ModelKind::FromKappa: return "from_kappa";
  }
  return "?";
}

GibbsTable::GibbsTable(Rational alpha, Rational theta)
    : a_(std::move(alpha)), t_(std::move(theta)), ad_(a_.get_d()), td_(t_.get_d()) {
  c_.resize(3);
  c_[2] = 1;
  q_.resize(3);
  q_[2] = 1.0 - ad_;
}

Rational GibbsTable::w_exact(int n) const {
  Rational w = 1;
  for (int i = 1; i < n; ++i) w *= Rational(i) - a_;
  return w;
}

Rational GibbsTable::c_exact(int n) {
  std::lock_guard lock(mu_);
  while (static_cast<int>(c_.size()) <= n) {
    int m = static_cast<int>(c_.size()) - 1;  // have c(m), build c(m+1)
    Rational next = (Rational(m) + t_) * c_[m] + w_exact(m);
    c_.push_back(next);
  }
  return c_[n];
}

double GibbsTable::q(int n) {
  std::lock_guard lock(mu_);
  while (static_cast<int>(q_.size()) <= n) {
    int m = static_cast<int>(q_.size()) - 1;
    double qm = q_[m];
    q_.push_back((m - ad_) * qm / (m + td_ + qm));
  }
  return q_[n];
}

namespace {

template <class T>
T param(const Rational& r, double d);
template <>
double param<double>(const Rational&, double d) {
  return d;
}
template <>
Rational param<Rational>(const Rational& r, double) {
  return r;
}

}  // namespace

GrowthModel GrowthModel::ford(const Rational& alpha) {
  GrowthModel m;
  m.kind_ = ModelKind::Ford;
  m.a_ = alpha;
  m.b_ = alpha;
  m.ad_ = m.bd_ = alpha.get_d();
  m.validate();
  return m;
}

GrowthModel GrowthModel::alpha_gamma(const Rational& alpha, const Rational& gamma) {
  GrowthModel m;
  m.kind_ = ModelKind::AlphaGamma;
  m.a_ = alpha;
  m.b_ = gamma;
  m.ad_ = alpha.get_d();
  m.bd_ = gamma.get_d();
  m.validate();
  return m;
}

GrowthModel GrowthModel::alpha_theta(const Rational& alpha, const Rational& theta) {
  GrowthModel m;
  m.kind_ = ModelKind::AlphaTheta;
  m.a_ = alpha;
  m.b_ = theta;
  m.ad_ = alpha.get_d();
  m.bd_ = theta.get_d();
  m.validate();
  return m;
}

GrowthModel GrowthModel::poisson_dirichlet(const Rational& alpha, const Rational& theta) {
  GrowthModel m;
  m.kind_ = ModelKind::PoissonDirichlet;
  m.a_ = alpha;
  m.b_ = theta;
  m.ad_ = alpha.get_d();
  m.bd_ = theta.get_d();
  m.gibbs_ = std::make_shared<GibbsTable>(alpha, theta);
  m.validate();
  return m;
}

GrowthModel GrowthModel::from_kappa(std::shared_ptr<const DislocationMeasure> kappa) {
  if (!kappa) throw SpecError("from_kappa needs a measure");
  GrowthModel m;
  m.kind_ = ModelKind::FromKappa;
  m.kappa_ = std::move(kappa);
  m.validate();
  return m;
}

void GrowthModel::validate() const {
  const Rational zero = 0, one = 1;
  switch (kind_) {
    case ModelKind::Ford:
    case ModelKind::AlphaGamma:
      if (a_ < zero || a_ > one) throw SpecError("alpha must lie in [0,1]");
      if (b_ < zero || b_ > a_) throw SpecError("gamma must lie in [0,alpha]");
      break;
    case ModelKind::AlphaTheta:
      if (a_ < zero || a_ > one) throw SpecError("alpha must lie in [0,1]");
      if (b_ < zero) throw SpecError("theta must be non-negative");
      break;
    case ModelKind::PoissonDirichlet:
      if (a_ < zero || a_ > one) throw SpecError("alpha must lie in [0,1]");
      if (b_ < Rational(-2 * a_)) throw SpecError("theta must be at least -2 alpha");
      if (Rational(3 + b_ - a_) <= zero) throw SpecError("degenerate Poisson-Dirichlet parameters");
      break;
    case ModelKind::FromKappa: {
      double k12 = kappa_->cylinder<double>(Partition(2, {{1}, {2}}));
      if (!(k12 > 0) || !std::isfinite(k12))
        throw SpecError("kappa({1},{2}) must be positive and finite");
      return;
    }
  }
  // Assumption (A): the root never keeps all insertions below it forever, g_n(0) < 1.
  for (int n = 2; n <= 24; ++n) {
    Rational g = g0<Rational>(n);
    if (g >= one || g < zero)
      throw SpecError(describe() + " violates g_n(0) < 1 at n = " + std::to_string(n));
    for (int b1 = 1; b1 < n; ++b1) {
      auto probs = growth_probs<Rational>(Partition::from_block_ids([&] {
        std::vector<int> ids(static_cast<size_t>(n), 1);
        for (int i = 0; i < b1; ++i) ids[i] = 0;
        return ids;
      }()));
      for (auto& p : probs)
        if (p < zero || p > one) throw SpecError(describe() + " gives a growth probability outside [0,1]");
    }
  }
}

bool GrowthModel::binary() const {
  switch (kind_) {
    case ModelKind::Ford: return true;
    case ModelKind::AlphaGamma: return a_ == b_;
    case ModelKind::AlphaTheta: return true;
    case ModelKind::PoissonDirichlet: return Rational(2 * a_ + b_) == 0;
    case ModelKind::FromKappa: return false;
  }
  return false;
}

bool GrowthModel::exact_capable() const { return kind_ != ModelKind::FromKappa || kappa_->supports_exact(); }

template <class T>
T GrowthModel::g0(int n) const {
  if (n < 1) throw SpecError("g_n needs n >= 1");
  if (n == 1) return T(1);
  const T a = param<T>(a_, ad_), b = param<T>(b_, bd_);
  switch (kind_) {
    case ModelKind::Ford:
    case ModelKind::AlphaGamma: return T(b / (T(n) - a));
    case ModelKind::AlphaTheta: return T(a / (T(n) - 1 + b));
    case ModelKind::PoissonDirichlet:
      if constexpr (std::is_same_v<T, Rational>) {
        return T(gibbs_->w_exact(n) / gibbs_->c_exact(n + 1));
      } else {
        double q = gibbs_->q(n);
        return q / (n + bd_ + q);
      }
    case ModelKind::FromKappa: {
      T ln = kappa_->lambda<T>(n), ln1 = kappa_->lambda<T>(n + 1);
      return T(1 - ln / ln1);
    }
  }
  return T(0);
}

template <class T>
std::vector<T> GrowthModel::growth_probs(const Partition& pi) const {
  const int n = pi.n();
  const int k = pi.num_blocks();
  if (k < 2) throw SpecError("growth rule needs a partition with at least two blocks");
  if (kind_ == ModelKind::FromKappa) return growth_from_kappa<T>(*kappa_, pi);
  const auto sizes = pi.sizes();
  std::vector<T> out(static_cast<size_t>(k + 2));
  const T a = param<T>(a_, ad_), b = param<T>(b_, bd_);
  switch (kind_) {
    case ModelKind::Ford:
    case ModelKind::AlphaGamma: {
      T den = T(n) - a;
      out[0] = b / den;
      for (int i = 0; i < k; ++i) out[i + 1] = (T(sizes[i]) - a) / den;
      out[k + 1] = (T(k - 1) * a - b) / den;
      break;
    }
    case ModelKind::AlphaTheta: {
      T den = T(n) - 1 + b;
      out[0] = a / den;
      out[1] = (T(sizes[0]) - 1 + b) / den;
      for (int i = 1; i < k; ++i) out[i + 1] = (T(sizes[i]) - a) / den;
      out[k + 1] = T(k - 2) * a / den;
      break;
    }
    case ModelKind::PoissonDirichlet: {
      T ratio;  // c(n) / c(n+1)
      if constexpr (std::is_same_v<T, Rational>) {
        ratio = gibbs_->c_exact(n) / gibbs_->c_exact(n + 1);
      } else {
        ratio = 1.0 / (n + bd_ + gibbs_->q(n));
      }
      out[0] = g0<T>(n);
      for (int i = 0; i < k; ++i) out[i + 1] = (T(sizes[i]) - a) * ratio;
      out[k + 1] = (T(k) * a + b) * ratio;
      break;
    }
    case ModelKind::FromKappa: break;
  }
  return out;
}

void GrowthModel::growth_probs_sizes(std::span<const int> sizes, int n, std::vector<double>& out) const {
  const int k = static_cast<int>(sizes.size());
  out.resize(static_cast<size_t>(k + 2));
  const double a = ad_, b = bd_;
  switch (kind_) {
    case ModelKind::Ford:
    case ModelKind::AlphaGamma: {
      double den = n - a;
      out[0] = b / den;
      for (int i = 0; i < k; ++i) out[i + 1] = (sizes[i] - a) / den;
      out[k + 1] = ((k - 1) * a - b) / den;
      return;
    }
    case ModelKind::AlphaTheta: {
      double den = n - 1 + b;
      out[0] = a / den;
      out[1] = (sizes[0] - 1 + b) / den;
      for (int i = 1; i < k; ++i) out[i + 1] = (sizes[i] - a) / den;
      out[k + 1] = (k - 2) * a / den;
      return;
    }
    case ModelKind::PoissonDirichlet: {
      double q = gibbs_->q(n);
      double ratio = 1.0 / (n + b + q);
      out[0] = q * ratio;
      for (int i = 0; i < k; ++i) out[i + 1] = (sizes[i] - a) * ratio;
      out[k + 1] = (k * a + b) * ratio;
      return;
    }
    case ModelKind::FromKappa:
      throw SpecError("size-based growth probabilities are not available for a kappa-defined model");
  }
}

double GrowthModel::g_first(int b1, int n) const {
  switch (kind_) {
    case ModelKind::Ford:
    case ModelKind::AlphaGamma: return (b1 - ad_) / (n - ad_);
    case ModelKind::AlphaTheta: return (b1 - 1 + bd_) / (n - 1 + bd_);
    case ModelKind::PoissonDirichlet: return (b1 - ad_) / (n + bd_ + gibbs_->q(n));
    case ModelKind::FromKappa: break;
  }
  throw SpecError("g_first needs a size-based model");
}

std::string GrowthModel::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case ModelKind::Ford: os << "ford(alpha=" << a_ << ")"; break;
    case ModelKind::AlphaGamma: os << "alpha_gamma(alpha=" << a_ << ", gamma=" << b_ << ")"; break;
    case ModelKind::AlphaTheta: os << "alpha_theta(alpha=" << a_ << ", theta=" << b_ << ")"; break;
    case ModelKind::PoissonDirichlet: os << "poisson_dirichlet(alpha=" << a_ << ", theta=" << b_ << ")"; break;
    case ModelKind::FromKappa: os << "from_kappa(" << kappa_->describe() << ")"; break;
  }
  return os.str();
}

template <class T>
std::vector<T> growth_from_kappa(const DislocationMeasure& kappa, const Partition& pi) {
  const int n = pi.n();
  const int k = pi.num_blocks();
  T ln = kappa.lambda<T>(n), ln1 = kappa.lambda<T>(n + 1);
  T kp = kappa.cylinder<T>(pi);
  if (kp == T(0)) throw SpecError("kappa(P^pi) = 0 for pi = " + pi.str() + "; growth rule undefined there");
  std::vector<T> out(static_cast<size_t>(k + 2));
  out[0] = T(1) - ln / ln1;
  T scale = ln / ln1 / kp;
  for (int i = 0; i <= k; ++i) out[i + 1] = kappa.cylinder<T>(pi.extended(i)) * scale;
  return out;
}

template double GrowthModel::g0<double>(int) const;
template Rational GrowthModel::g0<Rational>(int) const;
template std::vector<double> GrowthModel::growth_probs<double>(const Partition&) const;
template std::vector<Rational> GrowthModel::growth_probs<Rational>(const Partition&) const;
template std::vector<double> growth_from_kappa<double>(const DislocationMeasure&, const Partition&);
template std::vector<Rational> growth_from_kappa<Rational>(const DislocationMeasure&, const Partition&);

}  // namespace rtg
