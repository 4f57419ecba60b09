#include "rtg/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <set>

namespace rtg {

double Summary::se() const { return count > 0 ? std::sqrt(variance / static_cast<double>(count)) : 0.0; }

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  // Welford
  double mean = 0, m2 = 0;
  std::size_t k = 0;
  for (double x : xs) {
    ++k;
    double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
  }
  s.mean = mean;
  s.variance = k > 1 ? m2 / static_cast<double>(k - 1) : 0.0;
  return s;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) return 1.0;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) return 1.0;
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    // handle ties: evaluate at the last copy
    if (i + 1 < a.size() && a[i + 1] == a[i]) continue;
    double f = cdf(a[i]);
    double lo = 0;
    // count strictly below a[i]
    std::size_t first = static_cast<std::size_t>(std::lower_bound(a.begin(), a.end(), a[i]) - a.begin());
    lo = static_cast<double>(first) / n;
    double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, std::abs(hi - f), std::abs(f - lo)});
  }
  return d;
}

double kolmogorov_q(double x) {
  if (x <= 0) return 1.0;
  if (x < 0.2) return 1.0;
  double sum = 0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_pvalue_one(double d, std::size_t n) {
  double sn = std::sqrt(static_cast<double>(n));
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

double ks_pvalue_two(double d, std::size_t n, std::size_t m) {
  double ne = static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m);
  double sn = std::sqrt(ne);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

ChiSquare chi_square(const std::vector<double>& observed, const std::vector<double>& probs, double min_expected) {
  ChiSquare out;
  double total = 0;
  for (double o : observed) total += o;
  // cells with small expectation are pooled into one bucket
  double stat = 0;
  int cells = 0;
  double pool_o = 0, pool_e = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    double e = probs[i] * total;
    if (e < min_expected) {
      pool_o += observed[i];
      pool_e += e;
      continue;
    }
    stat += (observed[i] - e) * (observed[i] - e) / e;
    ++cells;
  }
  if (pool_e > 0) {
    stat += (pool_o - pool_e) * (pool_o - pool_e) / pool_e;
    ++cells;
  } else if (pool_o > 0) {
    out.statistic = INFINITY;
    out.dof = std::max(1, cells - 1);
    out.pvalue = 0;
    return out;
  }
  out.statistic = stat;
  out.dof = std::max(1, cells - 1);
  boost::math::chi_squared dist(out.dof);
  out.pvalue = boost::math::cdf(boost::math::complement(dist, stat));
  return out;
}

ChiSquare chi_square(const std::map<std::string, long>& observed, const std::map<std::string, double>& probs) {
  std::vector<double> o, p;
  for (const auto& [k, v] : probs) {
    auto it = observed.find(k);
    o.push_back(it == observed.end() ? 0.0 : static_cast<double>(it->second));
    p.push_back(v);
  }
  for (const auto& [k, v] : observed) {
    if (!probs.count(k) && v > 0) return ChiSquare{INFINITY, 1, 0.0};
  }
  return chi_square(o, p);
}

std::vector<long> log_spaced(long lo, long hi, int points) {
  std::set<long> out;
  if (points < 2 || hi <= lo) {
    out.insert(lo);
    out.insert(hi);
  } else {
    double a = std::log(static_cast<double>(lo)), b = std::log(static_cast<double>(hi));
    for (int i = 0; i < points; ++i) {
      double t = a + (b - a) * i / (points - 1);
      out.insert(std::clamp(static_cast<long>(std::llround(std::exp(t))), lo, hi));
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace rtg
