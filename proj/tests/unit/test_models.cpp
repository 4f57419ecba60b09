#include <doctest.h>

#include <cmath>
#include <map>

#include "rtg/diagnostics.hpp"
#include "rtg/growth.hpp"
#include "rtg/laws.hpp"
#include "rtg/measure.hpp"
#include "rtg/model.hpp"

using namespace rtg;

TEST_CASE("ford(1/2) splits [3] uniformly") {
  auto m = GrowthModel::ford(Rational(1, 2));
  for (const auto& pi : nontrivial_partitions(3)) {
    Rational p = splitting_prob<Rational>(m, pi);
    if (pi.num_blocks() == 2)
      CHECK(p == Rational(1, 3));
    else
      CHECK(p == 0);
  }
}

TEST_CASE("lambda recursion, hand values") {
  // ford(1/2): g_2(0) = 1/3, g_3(0) = (1/2)/(5/2) = 1/5
  auto lam = lambda_seq<Rational>(GrowthModel::ford(Rational(1, 2)), Rational(1), 4);
  CHECK(lam[2] == 1);
  CHECK(lam[3] == Rational(3, 2));
  CHECK(lam[4] == Rational(15, 8));
}

TEST_CASE("growth rows sum to one") {
  std::vector<GrowthModel> ms{GrowthModel::ford(Rational(1, 5)), GrowthModel::alpha_gamma(Rational(2, 3), Rational(1, 3)),
                              GrowthModel::alpha_theta(Rational(1, 3), Rational(2)),
                              GrowthModel::poisson_dirichlet(Rational(1, 3), Rational(-1, 4))};
  for (const auto& m : ms)
    for (int n = 2; n <= 5; ++n)
      for (const auto& pi : nontrivial_partitions(n)) {
        Rational s = 0;
        for (const auto& g : m.growth_probs<Rational>(pi)) {
          CHECK(g >= 0);
          s += g;
        }
        CHECK(s == 1);
      }
}

TEST_CASE("Gibbs normaliser, hand value") {
  GibbsTable t(Rational(1, 2), Rational(-1));
  CHECK(t.c_exact(3) == Rational(3, 2));
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS(GrowthModel::ford(Rational(3, 2)));
  CHECK_THROWS(GrowthModel::alpha_gamma(Rational(1, 2), Rational(3, 4)));
}

TEST_CASE("ordered-beta Laplace exponent at 1") {
  // closed form 1/(theta + 1 - alpha) under kappa({1},{2}) = 1
  for (auto [a, t] : std::vector<std::pair<Rational, Rational>>{
           {Rational(1, 2), Rational(1, 2)}, {Rational(1, 3), Rational(2)}, {Rational(3, 4), Rational(1, 4)}}) {
    auto d = DislocationMeasure::ordered_beta(a, t);
    CHECK(d.laplace_exponent(1.0) == doctest::Approx(1.0 / Rational(t + 1 - a).get_d()).epsilon(1e-8));
  }
  // alpha = theta = 1/2 at gamma = 1/2 gives 2/pi
  auto d = DislocationMeasure::ordered_beta(Rational(1, 2), Rational(1, 2));
  CHECK(d.laplace_exponent(0.5) == doctest::Approx(2.0 / M_PI).epsilon(1e-8));
}

TEST_CASE("first-block sampler: both samplers follow the exact law") {
  auto m = GrowthModel::alpha_theta(Rational(1, 2), Rational(1, 2));
  const int n = 10;
  FirstBlockSampler fb(m, n);
  auto law = fb.law(n);
  double tot = 0;
  for (int b = 1; b < n; ++b) tot += law[static_cast<size_t>(b)];
  CHECK(tot == doctest::Approx(1.0));
  // law against exact splitting probabilities
  std::map<int, Rational> exact;
  for (const auto& pi : nontrivial_partitions(n)) exact[pi.block_size(0)] += splitting_prob<Rational>(m, pi);
  for (int b = 1; b < n; ++b) CHECK(law[static_cast<size_t>(b)] == doctest::Approx(exact[b].get_d()).epsilon(1e-10));
  Rng rng(5);
  const int N = 200000;
  std::vector<double> fast(n, 0), slow(n, 0);
  for (int i = 0; i < N; ++i) {
    fast[static_cast<size_t>(fb.sample(n, rng))] += 1;
    slow[static_cast<size_t>(fb.sample_chain(n, rng))] += 1;
  }
  std::vector<double> p(law.begin() + 1, law.begin() + n), f(fast.begin() + 1, fast.end()), s(slow.begin() + 1, slow.end());
  CHECK(chi_square(f, p).pvalue > 1e-4);
  CHECK(chi_square(s, p).pvalue > 1e-4);
}

TEST_CASE("hm identity holds exactly") {
  std::vector<RankedTest> tests{[](const std::vector<Rational>&) { return Rational(1); },
                                [](const std::vector<Rational>& s) { return s[0]; }};
  for (const auto& m : {GrowthModel::ford(Rational(1, 2)), GrowthModel::alpha_theta(Rational(1, 3), Rational(2))})
    for (int n = 2; n <= 7; ++n) {
      auto lam = lambda_seq<Rational>(m, Rational(1), n);
      CHECK(hm_condition_measure(m, Rational(1), n, lam[static_cast<size_t>(n)], tests).identity_holds());
    }
  auto f = GrowthModel::ford(Rational(1, 2));
  auto h = hm_condition_measure(f, Rational(1), 3, Rational(3, 2), tests);
  CHECK(h.atoms.at({2, 1}) == Rational(1, 2));
  CHECK(h.atoms.at({1, 1, 1}) == 0);
}

TEST_CASE("grown trees have the requested size") {
  Rng rng(11);
  auto m = GrowthModel::poisson_dirichlet(Rational(1, 2), Rational(1, 2));
  for (int n : {1, 2, 5, 40}) {
    auto t = grow(m, n, rng);
    std::string why;
    CHECK(t.check_invariants(&why));
    CHECK(t.leaf_count() == n);
  }
}
