#include "rtg/diagnostics.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "rtg/error.hpp"
#include "rtg/fragsim.hpp"
#include "rtg/growth.hpp"
#include "rtg/laws.hpp"
#include "rtg/parallel.hpp"
#include "rtg/partition.hpp"
#include "rtg/tree.hpp"

namespace rtg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Sum of gamma j^{gamma-2}, j > n: atoms still trivial at level n, each off by 1/j.
std::pair<double, double> trivial_tail(double gamma, long n) { return PowerTail{gamma, 0}.deficit_sum_bounds(n + 1); }

SeriesPoint bracket(long n, double finite, double abs_sum, long terms, std::pair<double, double> tail) {
  // each term carries a few roundings; the running sum adds one more per term
  const double round = 4.0 * kEps * abs_sum * static_cast<double>(terms + 1);
  SeriesPoint p;
  p.n = n;
  p.value = finite + 0.5 * (tail.first + tail.second);
  p.lo = finite + tail.first - round;
  p.hi = finite + tail.second + round;
  return p;
}

// E[max(X, n - X)] / n with X = c + Bin(m, p), m = n - c
double expected_max_fraction(long n, long c, double p) {
  const long m = n - c;
  if (m <= 0) return static_cast<double>(std::max(c, n - c)) / static_cast<double>(n);
  if (p <= 0) return static_cast<double>(std::max(c, n - c)) / static_cast<double>(n);
  if (p >= 1) return 1.0;
  // E[X] + E[(n - 2X)^+]
  double ex = static_cast<double>(c) + static_cast<double>(m) * p;
  const double lp = std::log(p), lq = std::log1p(-p);
  const double lgm = std::lgamma(static_cast<double>(m) + 1);
  double extra = 0;
  for (long k = 0; k <= m; ++k) {
    long x = c + k;
    long d = n - 2 * x;
    if (d <= 0) break;
    double lpmf = lgm - std::lgamma(static_cast<double>(k) + 1) - std::lgamma(static_cast<double>(m - k) + 1) +
                  static_cast<double>(k) * lp + static_cast<double>(m - k) * lq;
    extra += static_cast<double>(d) * std::exp(lpmf);
  }
  return (ex + extra) / static_cast<double>(n);
}

template <class F>
double integrate01(F f, double lo = 0.0, double hi = 1.0) {
  boost::math::quadrature::tanh_sinh<double> ts(12);
  double err = 0;
  return ts.integrate(f, lo, hi, 1e-9, &err);
}

struct AtomState {
  double first = 1, ranked = 1;  // at level n
};

AtomState atom_at(const Atom& a, long n) {
  if (n < a.onset) return {};
  if (a.family->is_two_block()) {
    double b = static_cast<double>(a.family->first_block_count(n));
    double nn = static_cast<double>(n);
    return {b / nn, std::max(b, nn - b) / nn};
  }
  Partition p = a.family->restrict_to(static_cast<int>(n));
  auto r = p.ranked_frequencies();
  return {static_cast<double>(p.block_size(0)) / static_cast<double>(n), r.front()};
}

double limit_first(const Atom& a) { return a.family->limit_frequencies().front(); }
double limit_ranked(const Atom& a) {
  auto f = a.family->limit_frequencies();
  return *std::max_element(f.begin(), f.end());
}

void check_level(const DislocationMeasure& d, long n) {
  if (n > d.max_level()) throw SpecError("level " + std::to_string(n) + " is beyond the listed atoms");
}

enum class Which { Tree, Mass, EqualSet };

std::vector<SeriesPoint> finite_atomic_series(const DislocationMeasure& d, const std::vector<long>& ns, Which w) {
  std::vector<SeriesPoint> out;
  const double sc = d.scale_d();
  for (long n : ns) {
    check_level(d, n);
    double sum = 0, abs_sum = 0;
    long terms = 0;
    for (const auto& a : d.atoms()) {
      AtomState s = atom_at(a, n);
      double term = 0;
      if (w == Which::Tree) {
        term = s.ranked - limit_ranked(a);
      } else if (w == Which::Mass) {
        term = s.first - limit_first(a);
      } else {
        if (limit_first(a) < limit_ranked(a)) continue;
        term = s.ranked - s.first;
      }
      sum += a.weight * term;
      abs_sum += std::abs(a.weight * term);
      ++terms;
    }
    std::pair<double, double> tail{0, 0};
    if (d.tail() && w != Which::EqualSet) tail = d.tail()->deficit_sum_bounds(d.tail()->first);
    auto p = bracket(n, sum * sc, abs_sum * sc, terms, {tail.first * sc, tail.second * sc});
    out.push_back(p);
  }
  return out;
}

// scale / raw_scale and the ordered-beta density pieces
struct ObmParts {
  double al, th, c;
};

ObmParts obm_parts(const DislocationMeasure& d) {
  if (d.kind() == DislocationMeasure::Kind::OrderedBeta)
    return {d.alpha().get_d(), d.theta().get_d(), d.scale_d() / d.raw_scale()};
  if (d.kind() == DislocationMeasure::Kind::FromGrowthRule && d.model()->kind() == ModelKind::AlphaTheta) {
    auto ob = DislocationMeasure::ordered_beta(d.model()->alpha(), d.model()->second());
    return {ob.alpha().get_d(), ob.theta().get_d(), d.scale_d() * d.lambda2().get_d() / ob.raw_scale()};
  }
  throw SpecError("frequencies are not available for " + d.describe());
}

std::vector<SeriesPoint> obm_series(const DislocationMeasure& d, const std::vector<long>& ns, Which w) {
  const auto [al, th, c] = obm_parts(d);
  std::vector<SeriesPoint> out;
  for (long n : ns) {
    if (n < 2) throw SpecError("series start at n = 2");
    double v = 0;
    if (w == Which::Mass) {
      // given u: E|Gamma_1^[n]| - u = 2(1-u)/n if 2 joins block 1, (1-2u)/n otherwise
      v = integrate01([&](double u) {
            double y = 1 - u;
            return (2 * al * u + th * (1 - 2 * u)) * std::pow(u, th - 1) * std::pow(y, -al) / static_cast<double>(n);
          });
    } else {
      v = integrate01([&](double u) {
        double y = 1 - u;
        double e2 = expected_max_fraction(n, 2, u);  // label 2 with label 1
        double e1 = expected_max_fraction(n, 1, u);
        double base = u * std::pow(u, th - 1) * std::pow(y, -al - 1);
        double b2 = y * std::pow(u, th - 1) * std::pow(y, -al - 1);
        if (w == Which::Tree) {
          double lim = std::max(u, y);
          return al * base * (e2 - lim) + th * b2 * (e1 - lim);
        }
        if (u < 0.5) return 0.0;
        // ranked minus first at level n
        double f2 = (2 + (n - 2) * u) / static_cast<double>(n);
        double f1 = (1 + (n - 2) * u) / static_cast<double>(n);
        return al * base * (e2 - f2) + th * b2 * (e1 - f1);
      });
    }
    v *= c;
    SeriesPoint p{n, v, v - 1e-7 * (1 + std::abs(v)), v + 1e-7 * (1 + std::abs(v))};
    out.push_back(p);
  }
  return out;
}

std::vector<SeriesPoint> exchangeable_series(const DislocationMeasure& d, const std::vector<long>& ns, Which w) {
  std::vector<SeriesPoint> out;
  const double sc = d.scale_d();
  for (long n : ns) {
    double v = 0;
    if (d.kind() == DislocationMeasure::Kind::PaintboxAtoms) {
      for (const auto& a : d.paintbox()) {
        std::vector<double> s;
        double tot = 0;
        for (const auto& x : a.s) {
          if (x > 0) s.push_back(x.get_d());
          tot += x.get_d();
        }
        const double dust = 1 - tot;
        double term = 0;
        if (w == Which::Mass) {
          for (double x : s) term += x * (1 - x);
          term = (term + dust) / static_cast<double>(n);
        } else if (w == Which::Tree) {
          if (s.size() == 1 && dust <= 0) {
            term = 0;
          } else if (s.size() <= 2 && dust <= 0) {
            term = expected_max_fraction(n, 0, s[0]) - s[0];
          } else {
            throw SpecError("ranked series for paintboxes with more than two colours or dust are not implemented");
          }
        } else {
          throw SpecError("equal-set series is not implemented for paintbox mixtures");
        }
        v += a.weight.get_d() * term;
      }
    } else {
      const double k = std::sqrt(2 / std::numbers::pi);
      if (w == Which::EqualSet) throw SpecError("equal-set series is not implemented for the Brownian measure");
      v = integrate01(
          [&](double x) {
            double y = 1 - x;
            double dens = k * std::pow(x * y, -1.5);
            if (w == Which::Mass) return dens * 2 * x * y / static_cast<double>(n);
            return dens * (expected_max_fraction(n, 0, x) - x);
          },
          0.5, 1.0);
    }
    v *= sc;
    out.push_back({n, v, v - 1e-7 * (1 + std::abs(v)), v + 1e-7 * (1 + std::abs(v))});
  }
  return out;
}

std::vector<SeriesPoint> measure_series(const DislocationMeasure& d, const std::vector<long>& ns, Which w) {
  using K = DislocationMeasure::Kind;
  switch (d.kind()) {
    case K::FiniteAtomic: return finite_atomic_series(d, ns, w);
    case K::OrderedBeta: return obm_series(d, ns, w);
    case K::PaintboxAtoms:
    case K::BrownianPaintbox: return exchangeable_series(d, ns, w);
    case K::FromGrowthRule: return obm_series(d, ns, w);
  }
  throw SpecError("unsupported measure");
}

std::vector<SeriesPoint> indexed_series(const IndexedExample& ex, const std::vector<long>& ns, Which w) {
  std::vector<SeriesPoint> out;
  for (long n : ns) {
    if (n < 2 || n > ex.horizon) throw SpecError("series level outside [2, horizon]");
    const double nn = static_cast<double>(n);
    double sum = 0, abs_sum = 0;
    for (long j = 2; j <= n; ++j) {
      const double b = static_cast<double>(ex.first_block_count(j, n));
      double term;
      if (w == Which::Tree) {
        term = std::max(b, nn - b) / nn - ex.limit(j);
      } else if (w == Which::Mass) {
        term = b / nn - ex.limit(j);
      } else {
        term = (std::max(b, nn - b) - b) / nn;
      }
      double t = ex.weight(j) * term;
      sum += t;
      abs_sum += std::abs(t);
    }
    auto tail = w == Which::EqualSet ? std::pair<double, double>{0, 0} : trivial_tail(ex.gamma, n);
    out.push_back(bracket(n, sum, abs_sum, n, tail));
  }
  return out;
}

}  // namespace

std::vector<SeriesPoint> tree_condition_series(const IndexedExample& ex, const std::vector<long>& ns) {
  return indexed_series(ex, ns, Which::Tree);
}

std::vector<SeriesPoint> mass_condition_series(const IndexedExample& ex, const std::vector<long>& ns) {
  return indexed_series(ex, ns, Which::Mass);
}

double mass_deficiency(const IndexedExample& ex, long n) {
  if (n < 2 || n > ex.horizon) throw SpecError("level outside [2, horizon]");
  const double nn = static_cast<double>(n);
  double d = 0;
  for (long j = 2; j <= n; ++j) {
    double f = static_cast<double>(ex.first_block_count(j, n)) / nn;
    double x = ex.limit(j);
    if (f < x) d += ex.weight(j) * (x - f);
  }
  return d;
}

std::vector<SeriesPoint> tree_condition_series(const DislocationMeasure& d, const std::vector<long>& ns) {
  return measure_series(d, ns, Which::Tree);
}

std::vector<SeriesPoint> mass_condition_series(const DislocationMeasure& d, const std::vector<long>& ns) {
  return measure_series(d, ns, Which::Mass);
}

EqualSetTerms equal_set_terms(const DislocationMeasure& d, const std::vector<long>& ns) {
  EqualSetTerms c;
  using K = DislocationMeasure::Kind;
  switch (d.kind()) {
    case K::FiniteAtomic:
      for (const auto& a : d.atoms())
        if (limit_first(a) < limit_ranked(a)) c.mismatch_mass += a.weight * d.scale_d();
      break;
    case K::OrderedBeta:
    case K::FromGrowthRule: {
      const auto [al, th, k] = obm_parts(d);
      // |Gamma_1| = u < 1/2; both integrable pieces near u = 0 need th > 0
      if (!(th > 0)) {
        c.mismatch_mass = std::numeric_limits<double>::infinity();
      } else {
        c.mismatch_mass = k * integrate01(
                                  [&](double u) {
                                    double y = 1 - u;
                                    return (al * u + th * y) * std::pow(u, th - 1) * std::pow(y, -al - 1);
                                  },
                                  0.0, 0.5);
      }
      break;
    }
    case K::PaintboxAtoms:
      for (const auto& a : d.paintbox()) {
        double tot = 0, s1 = a.s.empty() ? 0.0 : a.s.front().get_d();
        double m = 0;
        for (const auto& x : a.s) {
          tot += x.get_d();
          if (x.get_d() < s1) m += x.get_d();
        }
        c.mismatch_mass += a.weight.get_d() * d.scale_d() * (m + (1 - tot));
      }
      break;
    case K::BrownianPaintbox: {
      const double k = std::sqrt(2 / std::numbers::pi);
      c.mismatch_mass =
          d.scale_d() * integrate01([&](double x) { return k * (1 - x) * std::pow(x * (1 - x), -1.5); }, 0.5, 1.0);
      break;
    }
  }
  c.equal_set = measure_series(d, ns, Which::EqualSet);
  return c;
}

EqualSetTerms equal_set_terms(const IndexedExample& ex, const std::vector<long>& ns) {
  EqualSetTerms c;
  c.mismatch_mass = 0;  // x_j = 1 - 1/j >= 1/2: label 1 always sits in the larger block in the limit
  c.equal_set = indexed_series(ex, ns, Which::EqualSet);
  return c;
}

std::string Verdict::text() const {
  std::ostringstream os;
  os << (converges ? "CONVERGES" : "FAILS") << " (max |S| over the last decade = " << tail_max
     << ", threshold " << threshold << ")";
  return os.str();
}

Verdict convergence_verdict(const std::vector<SeriesPoint>& s, double threshold) {
  if (s.empty()) throw SpecError("empty series");
  Verdict v;
  v.threshold = threshold;
  const long last = s.back().n;
  for (const auto& p : s)
    if (10 * p.n >= last) v.tail_max = std::max(v.tail_max, std::max(std::abs(p.lo), std::abs(p.hi)));
  v.converges = v.tail_max < threshold;
  return v;
}

HmCheck hm_condition_measure(const GrowthModel& m, const Rational& lambda2, int n, const Rational& a_n,
                             const std::vector<RankedTest>& tests) {
  if (n < 2) throw SpecError("n must be at least 2");
  HmCheck h;
  const Rational nn(n);
  for (auto& [sizes, p] : unlabelled_split<Rational>(m, n)) {
    Rational mass = a_n * (Rational(1) - Rational(sizes.front()) / nn) * p;
    h.atoms.emplace(sizes, mass);
  }
  for (const auto& f : tests) {
    Rational lhs = 0;
    for (const auto& [sizes, mass] : h.atoms) {
      std::vector<Rational> s;
      for (int x : sizes) s.push_back(Rational(x) / nn);
      lhs += mass * f(s);
    }
    h.lhs.push_back(lhs);
  }
  // same quantity from kappa cylinders of the measure built from the rule
  auto d = DislocationMeasure::from_growth_rule(m, lambda2);
  const Rational lam = d.lambda<Rational>(n);
  std::vector<Rational> rhs(tests.size(), Rational(0));
  for (const auto& pi : nontrivial_partitions(n)) {
    auto sz = pi.sizes();
    std::sort(sz.begin(), sz.end(), std::greater<>());
    std::vector<Rational> s;
    for (int x : sz) s.push_back(Rational(x) / nn);
    Rational k = d.cylinder<Rational>(pi);
    for (size_t i = 0; i < tests.size(); ++i) rhs[i] += (Rational(1) - s.front()) * tests[i](s) * k;
  }
  for (auto& r : rhs) r = a_n / lam * r;
  h.rhs = std::move(rhs);
  return h;
}

namespace {

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  double pos = q * static_cast<double>(v.size() - 1);
  size_t i = static_cast<size_t>(pos);
  double fr = pos - static_cast<double>(i);
  if (i + 1 >= v.size()) return v.back();
  return v[i] * (1 - fr) + v[i + 1] * fr;
}

}  // namespace

std::vector<HeightRow> height_scaling_experiment(const GrowthModel& m, const std::vector<long>& ns, int samples,
                                                 std::uint64_t seed, int threads) {
  if (samples < 2) throw SpecError("need at least two samples");
  if (!std::is_sorted(ns.begin(), ns.end())) throw SpecError("n list must be increasing");
  long nmax = ns.empty() ? 2 : ns.back();
  auto lam = lambda_seq<double>(m, 1.0, static_cast<int>(std::max(nmax, 2L)));
  std::vector<HeightRow> rows;
  for (size_t r = 0; r < ns.size(); ++r) {
    const long n = ns[r];
    HeightRow row;
    row.n = n;
    row.lambda = n >= 2 ? lam[n] : 1.0;
    row.values.assign(static_cast<size_t>(samples), 0.0);
    parallel_samples(static_cast<size_t>(samples), mix_seed(seed, static_cast<std::uint64_t>(n)), threads,
                     [&](std::size_t i, Rng& rng) {
                       LabelledTree t = grow(m, static_cast<int>(n), rng);
                       row.values[i] = t.height() / row.lambda;
                     });
    Summary s = summarize(row.values);
    row.mean = s.mean;
    row.se = s.se();
    row.q10 = quantile(row.values, 0.1);
    row.q50 = quantile(row.values, 0.5);
    row.q90 = quantile(row.values, 0.9);
    row.drift = rows.empty() ? 0.0 : row.mean / rows.back().mean - 1;
    rows.push_back(std::move(row));
  }
  return rows;
}

ResidualLimitReport residual_limit_test(const ResidualSampler& chain, const JumpLaw& law, double gamma, long n,
                                        const std::vector<double>& times, int samples, std::uint64_t seed,
                                        int threads, double psi_gamma) {
  if (samples < 2) throw SpecError("need at least two samples");
  ResidualLimitReport rep;
  rep.n = n;
  rep.samples = samples;
  rep.times = times;
  rep.psi_gamma = psi_gamma;
  rep.jump_law = law.describe;
  const double lam = chain.lambda(n);
  const size_t T = times.size(), S = static_cast<size_t>(samples);
  std::vector<std::vector<double>> cv(T, std::vector<double>(S)), lv(T, std::vector<double>(S));
  std::vector<double> ca(S), la(S);
  parallel_samples(S, mix_seed(seed, 1), threads, [&](std::size_t i, Rng& rng) {
    MassChainPath p = chain.sample(n, rng);
    for (size_t k = 0; k < T; ++k) cv[k][i] = scaled_value(p, lam, times[k]);
    ca[i] = static_cast<double>(p.absorption()) / lam;
  });
  std::vector<double> sorted_times = times;
  std::sort(sorted_times.begin(), sorted_times.end());
  parallel_samples(S, mix_seed(seed, 2), threads, [&](std::size_t i, Rng& rng) {
    LampertiPath p = lamperti_path(law, gamma, sorted_times, rng, 1e-4, psi_gamma);
    for (size_t k = 0; k < T; ++k) {
      size_t idx = static_cast<size_t>(std::lower_bound(sorted_times.begin(), sorted_times.end(), times[k]) -
                                       sorted_times.begin());
      lv[k][i] = p.values[idx];
    }
    la[i] = p.absorption;
  });
  for (size_t k = 0; k < T; ++k) rep.ks.push_back(ks_two_sample(cv[k], lv[k]));
  Summary a = summarize(ca), b = summarize(la);
  rep.absorption_mean = a.mean;
  rep.absorption_se = a.se();
  rep.limit_mean = b.mean;
  rep.limit_se = b.se();
  return rep;
}

CtmcReport ctmc_check(const GrowthModel& m, double lambda2, int n, int samples, std::uint64_t seed, int threads) {
  if (n < 3 || n > kMaxEnumerateTrees) throw ResourceError("ctmc check enumerates trees; use 3 <= n <= 8");
  CtmcReport rep;
  rep.n = n;
  rep.samples = samples;
  std::map<std::string, double> law_n, law_prev;
  for_each_tree(n, [&](const LabelledTree& t) { law_n[t.canonical()] = to_double(tree_prob<Rational>(m, t)); });
  for_each_tree(n - 1,
                [&](const LabelledTree& t) { law_prev[t.canonical()] = to_double(tree_prob<Rational>(m, t)); });
  std::vector<std::string> shape(static_cast<size_t>(samples)), proj(static_cast<size_t>(samples));
  std::vector<std::vector<std::pair<int, double>>> holds(static_cast<size_t>(samples));
  parallel_samples(static_cast<size_t>(samples), seed, threads, [&](std::size_t i, Rng& rng) {
    TimedGenealogy g = ctmc_genealogy(m, lambda2, n, rng);
    shape[i] = g.tree.canonical();
    proj[i] = g.tree.without_leaf(n).canonical();
    holds[i] = std::move(g.holds);
  });
  std::map<std::string, long> cs, cp;
  for (auto& s : shape) ++cs[s];
  for (auto& s : proj) ++cp[s];
  rep.shape = chi_square(cs, law_n);
  rep.projective = chi_square(cp, law_prev);
  auto lam = lambda_seq<double>(m, lambda2, n);
  std::map<int, std::vector<double>> by_size;
  for (auto& hs : holds)
    for (auto& [size, h] : hs) by_size[size].push_back(h);
  for (auto& [size, v] : by_size) {
    const double rate = lam[size];
    double d = ks_one_sample(v, [rate](double x) { return x <= 0 ? 0.0 : -std::expm1(-rate * x); });
    rep.holding_ks_p[size] = ks_pvalue_one(d, v.size());
    rep.holding_count[size] = static_cast<long>(v.size());
  }
  return rep;
}

double lambda_index(const std::vector<double>& lambda, long n) {
  if (n < 4 || n >= static_cast<long>(lambda.size())) throw SpecError("lambda_index needs 4 <= n < table size");
  return std::log(lambda[n] / lambda[n / 2]) / std::log(static_cast<double>(n) / static_cast<double>(n / 2));
}

}  // namespace rtg
