#include <doctest.h>

#include <cmath>

#include "rtg/diagnostics.hpp"
#include "rtg/fragsim.hpp"
#include "rtg/lamperti.hpp"
#include "rtg/laws.hpp"
#include "rtg/spec_io.hpp"
#include "rtg/stats.hpp"

using namespace rtg;

TEST_CASE("model json round trip") {
  for (const auto& m : {GrowthModel::ford(Rational(1, 5)), GrowthModel::alpha_gamma(Rational(1, 2), Rational(1, 4)),
                        GrowthModel::alpha_theta(Rational(1, 3), Rational(2)),
                        GrowthModel::poisson_dirichlet(Rational(1, 3), Rational(-1, 4))}) {
    GrowthModel back = model_from_json(model_to_json(m));
    CHECK(back.describe() == m.describe());
    for (const auto& pi : nontrivial_partitions(4))
      CHECK(splitting_prob<Rational>(back, pi) == splitting_prob<Rational>(m, pi));
  }
  CHECK_THROWS(model_from_json(parse_json_text(R"({"kind":"ford","alpha":"2"})")));
  CHECK_THROWS(parse_json_text("{not json"));
}

TEST_CASE("partition, tree and measure json round trip") {
  Partition p = parse_partition("{1,4}{2,3}");
  CHECK(partition_from_json(partition_to_json(p)).str() == p.str());
  LabelledTree t = parse_newick("((1,(2,4)),3);");
  CHECK(tree_from_json(tree_to_json(t)).canonical() == t.canonical());
  auto d = DislocationMeasure::ordered_beta(Rational(1, 2), Rational(1, 2));
  auto back = measure_from_json(measure_to_json(d));
  for (const auto& pi : nontrivial_partitions(4)) CHECK(back.cylinder<Rational>(pi) == d.cylinder<Rational>(pi));
}

TEST_CASE("Lamperti absorption with a single atom") {
  // xi jumps by y at rate r: psi(gamma) = r (1 - e^{-gamma y}); E[absorption] = 1/psi
  const double y = std::log(2.0), r = 1.5, gamma = 1.0;
  JumpLaw law = single_atom_jumps(y, r);
  const double psi = r * (1 - std::exp(-gamma * y));
  Rng rng(3);
  std::vector<double> a;
  for (int i = 0; i < 20000; ++i) a.push_back(lamperti_path(law, gamma, {}, rng, 1e-9).absorption);
  Summary s = summarize(a);
  CHECK(std::abs(s.mean - 1 / psi) < 4 * s.se());
}

TEST_CASE("Brownian dislocation restricted law") {
  BrownianNu nu(1e-2);
  CHECK(nu.total() > 0);
  CHECK(nu.mean_of([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-8));
  Rng rng(9);
  double m = 0;
  const int N = 100000;
  for (int i = 0; i < N; ++i) {
    double s = nu.sample_s1(rng);
    CHECK_UNARY(s >= 0.5);
    CHECK_UNARY(s <= 1 - 1e-2 + 1e-12);
    m += s;
  }
  CHECK(m / N == doctest::Approx(nu.mean_of([](double s) { return s; })).epsilon(5e-3));
}

TEST_CASE("convergence verdicts") {
  std::vector<SeriesPoint> small, big;
  for (long n = 10; n <= 100000; n *= 10) {
    double v = 1.0 / static_cast<double>(n);
    small.push_back({n, v, v, v});
    big.push_back({n, 0.5, 0.49, 0.51});
  }
  CHECK(convergence_verdict(small).converges);
  CHECK_FALSE(convergence_verdict(big).converges);
}

TEST_CASE("KS and chi-square sanity") {
  std::vector<double> a{1, 2, 3, 4}, b{1, 2, 3, 4};
  CHECK(ks_two_sample(a, b) == 0.0);
  CHECK(ks_two_sample({0, 0, 0}, {1, 1, 1}) == 1.0);
  auto c = chi_square(std::vector<double>{50, 50}, std::vector<double>{0.5, 0.5});
  CHECK(c.statistic == doctest::Approx(0.0));
  CHECK(c.pvalue == doctest::Approx(1.0));
}
