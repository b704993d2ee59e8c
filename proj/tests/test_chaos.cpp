#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "radstein/chaos.hpp"
#include "radstein/enumeration.hpp"
#include "radstein/montecarlo.hpp"
#include "radstein/verify.hpp"

using namespace radstein;

namespace {

RademacherSpace test_space() { return RademacherSpace({0.3, 0.5, 0.7, 0.45, 0.6}); }

Functional test_table(std::uint64_t stream) {
  std::vector<double> vals(32);
  for (std::size_t i = 0; i < vals.size(); ++i)
    vals[i] = 2.0 * rng::uniform(11, stream, i) - 1.0;
  return Functional::from_table(5, vals);
}

}  // namespace

TEST_CASE("coordinate functional decomposes into a single first-order kernel") {
  RademacherSpace space = test_space();
  const ChaosDecomposition d = stroock_decompose(space, Functional::coordinate(space, 2));
  CHECK(d.mean == doctest::Approx(0.0));
  REQUIRE(d.kernels.size() >= 1);
  CHECK(d.kernels[0].value({2}) == doctest::Approx(1.0));
  CHECK(d.variance() == doctest::Approx(1.0));
  for (std::size_t i = 1; i < d.kernels.size(); ++i)
    CHECK(d.kernels[i].norm_squared() == doctest::Approx(0.0));
}

TEST_CASE("decomposition reconstructs the functional pointwise") {
  RademacherSpace space = test_space();
  Functional f = test_table(1);
  Functional rec = to_functional(space, stroock_decompose(space, f));
  for (std::size_t mask = 0; mask < 32; ++mask) {
    const Configuration c = Configuration::from_mask(5, mask);
    CHECK(rec(c) == doctest::Approx(f(c)).epsilon(1e-12));
  }
}

TEST_CASE("variance equals the weighted sum of kernel norms") {
  RademacherSpace space = test_space();
  Functional f = test_table(2);
  const auto [mean, sd] = exact_mean_stddev(space, f);
  const ChaosDecomposition d = stroock_decompose(space, f);
  CHECK(d.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(d.variance() == doctest::Approx(sd * sd).epsilon(1e-12));
}

TEST_CASE("multiple integrals of different orders are orthogonal") {
  CHECK(isometry_residual(21) < 1e-9);
}

TEST_CASE("ornstein-uhlenbeck generator and inverse") {
  RademacherSpace space = test_space();
  const auto [mean, sd] = exact_mean_stddev(space, test_table(3));
  Functional f = normalize(test_table(3), mean, sd);
  const ChaosDecomposition d = stroock_decompose(space, f);

  // L^{-1} undoes L on centred functionals.
  const ChaosDecomposition roundtrip =
      ou_transform(ou_transform(d, OuMode::L), OuMode::LInverse);
  Functional back = to_functional(space, roundtrip);
  for (std::size_t mask = 0; mask < 32; ++mask) {
    const Configuration c = Configuration::from_mask(5, mask);
    CHECK(back(c) == doctest::Approx(f(c)).epsilon(1e-11));
  }

  // The inverse refuses non-centred input.
  const ChaosDecomposition shifted = stroock_decompose(space, test_table(3));
  CHECK_THROWS_AS(ou_transform(shifted, OuMode::LInverse), std::invalid_argument);
}

TEST_CASE("semigroup interpolates between identity and the mean") {
  RademacherSpace space = test_space();
  Functional f = test_table(4);
  const ChaosDecomposition d = stroock_decompose(space, f);
  Functional p0 = to_functional(space, ou_transform(d, OuMode::Semigroup, 0.0));
  Functional pbig = to_functional(space, ou_transform(d, OuMode::Semigroup, 40.0));
  for (std::size_t mask = 0; mask < 32; ++mask) {
    const Configuration c = Configuration::from_mask(5, mask);
    CHECK(p0(c) == doctest::Approx(f(c)).epsilon(1e-12));
    CHECK(pbig(c) == doctest::Approx(d.mean).epsilon(1e-12));
  }
  // Semigroup property: P_s P_t = P_{s+t}.
  Functional pst = to_functional(
      space, ou_transform(ou_transform(d, OuMode::Semigroup, 0.3), OuMode::Semigroup, 0.5));
  Functional psum = to_functional(space, ou_transform(d, OuMode::Semigroup, 0.8));
  for (std::size_t mask = 0; mask < 32; ++mask) {
    const Configuration c = Configuration::from_mask(5, mask);
    CHECK(pst(c) == doctest::Approx(psum(c)).epsilon(1e-12));
  }
}

TEST_CASE("gradient through the chaos representation matches the pathwise one") {
  RademacherSpace space = test_space();
  Functional f = test_table(5);
  const ChaosDecomposition d = stroock_decompose(space, f);
  for (int k = 0; k < 5; ++k) {
    Functional dk = to_functional(space, gradient_via_chaos(d, k));
    for (std::size_t mask = 0; mask < 32; ++mask) {
      const Configuration c = Configuration::from_mask(5, mask);
      CHECK(dk(c) == doctest::Approx(pathwise_gradient(space, f, c, k)).epsilon(1e-11));
    }
  }
}

TEST_CASE("divergence is adjoint to the gradient") {
  RademacherSpace space = test_space();
  std::vector<Functional> u;
  for (int k = 0; k < 5; ++k) u.push_back(test_table(10 + k));
  Functional delta = divergence(space, u);
  Functional g = test_table(20);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t mask = 0; mask < 32; ++mask) {
    const Configuration c = Configuration::from_mask(5, mask);
    const double w = space.probability(c);
    lhs += w * g(c) * delta(c);
    for (int k = 0; k < 5; ++k)
      rhs += w * pathwise_gradient(space, g, c, k) * u[k](c);
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
}

TEST_CASE("divergence of the gradient is minus the generator") {
  CHECK(delta_d_equals_l_residual(33) < 1e-9);
}

TEST_CASE("dense coefficient transform round-trips") {
  RademacherSpace space = test_space();
  std::vector<double> vals(32);
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = std::cos(1.7 * i);
  const std::vector<double> coeffs = dense::chaos_coefficients(space, vals);
  const std::vector<double> back = dense::evaluate_coefficients(space, coeffs);
  for (std::size_t i = 0; i < vals.size(); ++i)
    CHECK(back[i] == doctest::Approx(vals[i]).epsilon(1e-12));
}

TEST_CASE("resampling estimate agrees with the exact semigroup") {
  RademacherSpace space = test_space();
  Functional f = test_table(6);
  const ChaosDecomposition d = stroock_decompose(space, f);
  const Configuration base = Configuration::from_mask(5, 0b10110);
  for (double t : {0.2, 0.8}) {
    Functional pt = to_functional(space, ou_transform(d, OuMode::Semigroup, t));
    const auto [est, se] = mehler_estimate(space, f, t, base, 40000, 77);
    CHECK(std::abs(est - pt(base)) < 4.0 * se);
  }
}

TEST_CASE("full identity suite passes across seeds") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const VerifyReport report = run_verify(kDefaultEnumerationCap, seed);
    for (const auto& check : report.checks) {
      INFO(check.name << " residual " << check.residual);
      CHECK(check.passed);
    }
  }
}

TEST_CASE("a corrupted gradient breaks the product rule check") {
  GradientFn bad = [](const RademacherSpace& space, const Functional& f, const Configuration& c,
                      int k) { return 2.0 * pathwise_gradient(space, f, c, k); };
  CHECK(product_formula_residual(42, bad) > 1e-3);
  CHECK(product_formula_residual(42) < 1e-9);
}
