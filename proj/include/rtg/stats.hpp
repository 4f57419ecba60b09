#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace rtg {

struct Summary {
  std::size_t count = 0;
  double mean = 0;
  double variance = 0;  // unbiased
  double se() const;
};
Summary summarize(const std::vector<double>& xs);

// Kolmogorov-Smirnov statistics. Inputs need not be sorted.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
double ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf);
// Asymptotic Kolmogorov tail P(sqrt(n_eff) D > x).
double kolmogorov_q(double x);
double ks_pvalue_one(double d, std::size_t n);
double ks_pvalue_two(double d, std::size_t n, std::size_t m);

struct ChiSquare {
  double statistic = 0;
  int dof = 0;
  double pvalue = 1;
};
// Observed counts against probabilities; cells with expectation below min_expected are pooled.
ChiSquare chi_square(const std::vector<double>& observed, const std::vector<double>& probs,
                     double min_expected = 5.0);
// Convenience for keyed outcomes; keys missing from probs make the test fail with p = 0.
ChiSquare chi_square(const std::map<std::string, long>& observed, const std::map<std::string, double>& probs);

std::vector<long> log_spaced(long lo, long hi, int points);

}  // namespace rtg
