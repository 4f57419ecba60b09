#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rtg/lamperti.hpp"
#include "rtg/measure.hpp"
#include "rtg/model.hpp"
#include "rtg/rational.hpp"
#include "rtg/residual.hpp"
#include "rtg/schedules.hpp"
#include "rtg/stats.hpp"

namespace rtg {

// value is the computed series; [lo, hi] brackets the exact value (tail and
// rounding bounds included).
struct SeriesPoint {
  long n = 0;
  double value = 0, lo = 0, hi = 0;
};

// int (|Gamma^[n]|_1^down - |Gamma|_1^down) kappa(dGamma)
std::vector<SeriesPoint> tree_condition_series(const IndexedExample& ex, const std::vector<long>& ns);
// int (|Gamma_1^[n]| - |Gamma_1|) kappa(dGamma)
std::vector<SeriesPoint> mass_condition_series(const IndexedExample& ex, const std::vector<long>& ns);
// sum over atoms with |Gamma_1^[n]| < |Gamma_1| of the weighted gap
double mass_deficiency(const IndexedExample& ex, long n);

std::vector<SeriesPoint> tree_condition_series(const DislocationMeasure& d, const std::vector<long>& ns);
std::vector<SeriesPoint> mass_condition_series(const DislocationMeasure& d, const std::vector<long>& ns);

struct EqualSetTerms {
  double mismatch_mass = 0;         // kappa(|Gamma_1| != |Gamma|_1^down)
  std::vector<SeriesPoint> equal_set;  // int over {|Gamma_1| = |Gamma|_1^down} of the ranked-minus-first gap
};
EqualSetTerms equal_set_terms(const DislocationMeasure& d, const std::vector<long>& ns);
EqualSetTerms equal_set_terms(const IndexedExample& ex, const std::vector<long>& ns);

// CONVERGES when every |value| over the last decade of the tested n is below threshold.
struct Verdict {
  bool converges = false;
  double threshold = 0.01;
  double tail_max = 0;  // max |S| over the last decade
  std::string text() const;
};
Verdict convergence_verdict(const std::vector<SeriesPoint>& s, double threshold = 0.01);

// a_n (1 - s_1) p_n^o(ds) as atoms (ranked sizes / n -> mass), and the same
// measure computed from kappa; f ranges over test functions of the ranked sequence.
struct HmCheck {
  std::map<std::vector<int>, Rational> atoms;  // ranked sizes -> a_n (1 - n_1/n) p_n^o
  std::vector<Rational> lhs, rhs;              // per test function
  bool identity_holds() const { return lhs == rhs; }
};
using RankedTest = std::function<Rational(const std::vector<Rational>&)>;
HmCheck hm_condition_measure(const GrowthModel& m, const Rational& lambda2, int n, const Rational& a_n,
                             const std::vector<RankedTest>& tests);

struct HeightRow {
  long n = 0;
  double lambda = 0, mean = 0, se = 0, q10 = 0, q50 = 0, q90 = 0;
  double drift = 0;  // mean / previous row's mean - 1
  std::vector<double> values;
};
std::vector<HeightRow> height_scaling_experiment(const GrowthModel& m, const std::vector<long>& ns, int samples,
                                                 std::uint64_t seed, int threads = 1);

struct ResidualLimitReport {
  long n = 0;
  int samples = 0;
  std::vector<double> times;
  std::vector<double> ks;  // per time
  double absorption_mean = 0, absorption_se = 0;  // A_n / lambda_n
  double limit_mean = 0, limit_se = 0;            // Lamperti absorption time
  double psi_gamma = 0;
  std::string jump_law;
};
ResidualLimitReport residual_limit_test(const ResidualSampler& chain, const JumpLaw& law, double gamma, long n,
                                        const std::vector<double>& times, int samples, std::uint64_t seed,
                                        int threads = 1, double psi_gamma = 0);

struct CtmcReport {
  int n = 0;
  int samples = 0;
  ChiSquare shape;       // labelled shape of the genealogy vs the exact tree law
  ChiSquare projective;  // genealogy with leaf n removed vs the exact law at n - 1
  std::map<int, double> holding_ks_p;  // block size -> KS p-value vs Exp(lambda_m)
  std::map<int, long> holding_count;
};
CtmcReport ctmc_check(const GrowthModel& m, double lambda2, int n, int samples, std::uint64_t seed, int threads = 1);

// log-log slope of lambda_n over [n/2, n]
double lambda_index(const std::vector<double>& lambda, long n);

}  // namespace rtg
