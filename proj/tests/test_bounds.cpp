#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "radstein/bounds.hpp"
#include "radstein/chaos.hpp"
#include "radstein/enumeration.hpp"
#include "radstein/montecarlo.hpp"
#include "radstein/orbits.hpp"
#include "radstein/stats/erdos_renyi.hpp"
#include "radstein/stats/tree.hpp"

using namespace radstein;

namespace {

Functional normalized_table(const RademacherSpace& space, int m, std::uint64_t stream) {
  std::vector<double> vals(std::size_t{1} << m);
  for (std::size_t i = 0; i < vals.size(); ++i)
    vals[i] = 2.0 * rng::uniform(13, stream, i) - 1.0;
  Functional f = Functional::from_table(m, vals);
  const auto [mean, sd] = exact_mean_stddev(space, f);
  return normalize(f, mean, sd);
}

double quantile(double u) {
  double lo = -10, hi = 10;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("holder triple validity and selection") {
  CHECK(HolderTriple{2, 4, 4}.valid());
  CHECK(HolderTriple{3, 3, 3}.valid());
  CHECK_FALSE(HolderTriple{2, 4, 5}.valid());
  CHECK_FALSE(HolderTriple{1, 4, 4}.valid());

  for (double alpha : {0.0, 0.3, 0.5, 0.6}) {
    const HolderTriple t = holder_select(alpha);
    CHECK(t.r == 2);
    CHECK(t.s == 4);
    CHECK(t.t == 4);
  }
  const HolderTriple t65 = holder_select(0.65);
  CHECK(t65.r == 4);
  CHECK(t65.s == doctest::Approx(8.0 / 3.0));
  CHECK(t65.valid());
  // The exponent requirement grows without limit as alpha -> 1.
  CHECK(holder_select(0.9).r >= holder_select(0.65).r);
  CHECK_THROWS_AS(holder_select(1.0), std::invalid_argument);
  CHECK_THROWS_AS(holder_select(-0.1), std::invalid_argument);
}

TEST_CASE("normal cdf reference values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.841344746068543).epsilon(1e-12));
  CHECK(normal_cdf(-1.0) == doctest::Approx(0.158655253931457).epsilon(1e-12));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_cdf(-8.0) == doctest::Approx(6.22096057427178e-16).epsilon(1e-6));
}

TEST_CASE("empirical kolmogorov distance vanishes on normal quantile grids") {
  double previous = 1.0;
  for (std::size_t n : {1000ULL, 10000ULL}) {
    std::vector<double> samples(n);
    for (std::size_t i = 0; i < n; ++i)
      samples[i] = quantile((i + 0.5) / static_cast<double>(n));
    const double dk = empirical_kolmogorov(samples);
    CHECK(dk < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(dk < previous);
    previous = dk;
  }
}

TEST_CASE("exact kolmogorov distance of a fair sign") {
  const double dk = exact_kolmogorov({{-1.0, 0.5}, {1.0, 0.5}});
  CHECK(dk == doctest::Approx(normal_cdf(1.0) - 0.5).epsilon(1e-12));
}

TEST_CASE("single-coin fixture reproduces the hand-computed bound") {
  RademacherSpace space(1, 0.5);
  Functional f = Functional::coordinate(space, 0);
  const BoundBreakdown bb =
      second_order_bound(space, f, HolderTriple{2, 4, 4}, BoundMode::Exact);
  CHECK(bb.terms[0] == doctest::Approx(0.0));
  CHECK(bb.terms[1] == doctest::Approx(0.0));
  CHECK(bb.terms[2] == doctest::Approx(std::sqrt(2.0 * M_PI) / 4.0).epsilon(1e-12));
  CHECK(bb.terms[3] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bb.terms[4] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(bb.terms[5] == doctest::Approx(0.0));
  CHECK(bb.terms[6] == doctest::Approx(0.0));
  CHECK(std::abs(bb.total - 3.626657) < 1e-6);

  const SteinBreakdown stein = malliavin_stein_bound(space, f);
  CHECK(stein.terms[0] == doctest::Approx(0.0));
  CHECK(stein.terms[1] == doctest::Approx(std::sqrt(2.0 * M_PI) / 4.0).epsilon(1e-12));
  CHECK(stein.terms[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stein.terms[3] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact mode rejects non-normalized input") {
  RademacherSpace space(2, 0.5);
  Functional f = Functional::constant(2, 2.0);
  CHECK_THROWS_AS(second_order_bound(space, f, HolderTriple{}, BoundMode::Exact),
                  std::invalid_argument);
  CHECK_THROWS_AS(malliavin_stein_bound(space, f), std::invalid_argument);
}

TEST_CASE("both bounds dominate the exact kolmogorov distance") {
  auto check_validity = [](const RademacherSpace& space, const Functional& f) {
    const double dk = exact_kolmogorov(enumerate_distribution(space, f));
    const BoundBreakdown bb = second_order_bound(space, f, HolderTriple{}, BoundMode::Exact);
    const SteinBreakdown stein = malliavin_stein_bound(space, f);
    CHECK(bb.total + 1e-9 >= dk);
    CHECK(stein.total + 1e-9 >= dk);
    for (double term : bb.terms) CHECK(term >= 0.0);
  };

  RademacherSpace biased({0.2, 0.7, 0.4, 0.55, 0.35});
  check_validity(biased, normalized_table(biased, 5, 100));
  check_validity(biased, normalized_table(biased, 5, 101));

  ErdosRenyiModel graph(5, 0.0, 0.3);
  RademacherSpace gspace = graph.space();
  Functional tri = triangle_statistic(graph);
  const auto [mean, sd] = exact_mean_stddev(gspace, tri);
  check_validity(gspace, normalize(tri, mean, sd));

  TreeModel tree = TreeModel::regular(2, 3);
  RademacherSpace tspace = tree.space(0.5);
  Functional perc = percolation_statistic(tree, 0.5);
  const auto [tmean, tsd] = exact_mean_stddev(tspace, perc, tspace.size());
  check_validity(tspace, normalize(perc, tmean, tsd));
}

TEST_CASE("poincare inequality holds with equality for linear functionals") {
  RademacherSpace space({0.3, 0.6, 0.45});
  std::vector<double> vals(8);
  for (int i = 0; i < 8; ++i) vals[i] = rng::uniform(17, 0, i);
  Functional f = Functional::from_table(3, vals);
  const auto [mean, sd] = exact_mean_stddev(space, f);
  CHECK(sd * sd <= poincare_upper(space, f) + 1e-12);

  Functional linear = linear_combination(1.5, Functional::coordinate(space, 0), -0.7,
                                         Functional::coordinate(space, 2));
  const auto [lm, lsd] = exact_mean_stddev(space, linear);
  CHECK(poincare_upper(space, linear) == doctest::Approx(lsd * lsd).epsilon(1e-12));

  SampleSpec spec;
  spec.count = 40000;
  spec.seed = 3;
  Functional g = f;
  g.gradient_oracle = [space, f](const Configuration& c, int k) {
    Configuration scratch = c;
    return gradient_value(space, f, scratch, k);
  };
  const MomentEstimate mc = poincare_upper_mc(space, g, spec, 1);
  CHECK(std::abs(mc.value - poincare_upper(space, f)) < 4.0 * mc.stderr_);
}

TEST_CASE("monte carlo bound matches the exact bound within batch-means error") {
  ErdosRenyiModel graph(6, 0.0, 0.3);
  RademacherSpace space = graph.space();
  Functional tri = triangle_statistic(graph);
  const auto [mean, sd] = exact_mean_stddev(space, tri);
  const BoundBreakdown exact =
      second_order_bound(space, normalize(tri, mean, sd), HolderTriple{}, BoundMode::Exact);

  McParams mc;
  mc.spec.count = 60000;
  mc.spec.seed = 9;
  SymmetryOrbits orbits = edge_transitive_orbits(graph, tri);
  mc.orbits = &orbits;
  const BoundBreakdown est =
      second_order_bound(space, tri, HolderTriple{}, BoundMode::MonteCarlo, mc);
  CHECK(est.mode == BoundMode::MonteCarlo);
  CHECK(est.normalization.estimated);
  for (int i = 0; i < 7; ++i) {
    INFO("term " << i + 1 << " exact " << exact.terms[i] << " mc " << est.terms[i]);
    CHECK(std::abs(est.terms[i] - exact.terms[i]) <= 5.0 * est.stderrs[i] + 1e-3);
  }
  CHECK(std::abs(est.total - exact.total) <= 5.0 * est.total_stderr + 5e-3);

  // Grouping tuples into orbits must agree with the one-class-per-tuple path.
  McParams direct = mc;
  direct.orbits = nullptr;
  const BoundBreakdown plain =
      second_order_bound(space, tri, HolderTriple{}, BoundMode::MonteCarlo, direct);
  CHECK(std::abs(plain.total - exact.total) <= 5.0 * plain.total_stderr + 5e-3);
}

TEST_CASE("monte carlo bound is deterministic for fixed seed and thread count") {
  ErdosRenyiModel graph(8, 0.0, 0.3);
  RademacherSpace space = graph.space();
  Functional tri = triangle_statistic(graph);
  SymmetryOrbits orbits = edge_transitive_orbits(graph, tri);
  auto run = [&](int threads) {
    McParams mc;
    mc.spec.count = 20000;
    mc.spec.seed = 4;
    mc.threads = threads;
    mc.orbits = &orbits;
    return second_order_bound(space, tri, HolderTriple{}, BoundMode::MonteCarlo, mc);
  };
  const BoundBreakdown a = run(1), b = run(1), c = run(2), d = run(8);
  CHECK(a.total == b.total);
  CHECK(a.total == c.total);
  CHECK(a.total == d.total);
  for (int i = 0; i < 7; ++i) {
    CHECK(a.terms[i] == c.terms[i]);
    CHECK(a.terms[i] == d.terms[i]);
  }
}
