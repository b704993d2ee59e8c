#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "radstein/enumeration.hpp"
#include "radstein/functional.hpp"
#include "radstein/montecarlo.hpp"
#include "radstein/parallel.hpp"
#include "radstein/space.hpp"

using namespace radstein;

TEST_CASE("configuration bit operations") {
  Configuration c(70);
  CHECK(c.size() == 70);
  for (int k = 0; k < 70; ++k) CHECK_FALSE(c.get(k));
  c.set(3, true);
  c.set(69, true);
  CHECK(c.get(3));
  CHECK(c.get(69));
  CHECK(c.sign(3) == 1);
  CHECK(c.sign(4) == -1);
  c.flip(3);
  CHECK_FALSE(c.get(3));
  int set_bits = 0;
  for (int k = 0; k < 70; ++k) set_bits += c.get(k) ? 1 : 0;
  CHECK(set_bits == 1);
  CHECK(Configuration::zeros(70) == Configuration(70));
  CHECK(Configuration::ones(3) == Configuration::from_mask(3, 0b111));

  Configuration d = Configuration::from_mask(6, 0b101101);
  CHECK(d.get(0));
  CHECK_FALSE(d.get(1));
  CHECK(d.get(5));
  CHECK(d == Configuration::from_mask(6, 0b101101));
  CHECK_FALSE(d == Configuration::from_mask(6, 0b101100));
}

TEST_CASE("space moments of the normalized coordinate") {
  RademacherSpace space({0.5, 0.2, 0.9});
  for (int k = 0; k < 3; ++k) {
    const double p = space.p(k), q = space.q(k);
    CHECK(space.sigma(k) == doctest::Approx(std::sqrt(p * q)).epsilon(1e-15));
    // The +1/-1 coordinate maps to q/sigma and -p/sigma; mean 0, variance 1.
    const double yplus = space.normalized_sign(1, k);
    const double yminus = space.normalized_sign(-1, k);
    CHECK(p * yplus + q * yminus == doctest::Approx(0.0));
    CHECK(p * yplus * yplus + q * yminus * yminus == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(RademacherSpace(std::vector<double>{0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(RademacherSpace(std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(RademacherSpace(0, 0.5), std::invalid_argument);
}

TEST_CASE("probability of a configuration multiplies coordinate laws") {
  RademacherSpace space(std::vector<double>{0.3, 0.6});
  CHECK(space.probability(Configuration::from_mask(2, 0b00)) ==
        doctest::Approx(0.7 * 0.4).epsilon(1e-15));
  CHECK(space.probability(Configuration::from_mask(2, 0b01)) ==
        doctest::Approx(0.3 * 0.4).epsilon(1e-15));
  CHECK(space.probability(Configuration::from_mask(2, 0b11)) ==
        doctest::Approx(0.3 * 0.6).epsilon(1e-15));
}

TEST_CASE("functional algebra") {
  RademacherSpace space(3, 0.4);
  Functional one = Functional::constant(3, 2.5);
  Functional y0 = Functional::coordinate(space, 0);
  CHECK(expectation_exact(space, one) == doctest::Approx(2.5));
  CHECK(expectation_exact(space, y0) == doctest::Approx(0.0));
  CHECK(expectation_exact(space, product(y0, y0)) == doctest::Approx(1.0));

  Functional combo = linear_combination(2.0, y0, -1.0, one);
  const Configuration c = Configuration::from_mask(3, 0b001);
  CHECK(combo(c) == doctest::Approx(2.0 * y0(c) - 2.5));

  const auto [mean, sd] = exact_mean_stddev(space, linear_combination(3.0, y0, 1.0, one));
  CHECK(mean == doctest::Approx(2.5));
  CHECK(sd == doctest::Approx(3.0));
  Functional norm = normalize(linear_combination(3.0, y0, 1.0, one), mean, sd);
  const auto [m2, s2] = exact_mean_stddev(space, norm);
  CHECK(m2 == doctest::Approx(0.0));
  CHECK(s2 == doctest::Approx(1.0));
}

TEST_CASE("gradient of a product obeys the discrete Leibniz correction") {
  RademacherSpace space(std::vector<double>{0.35, 0.7});
  std::vector<double> va = {0.3, -1.2, 0.8, 2.0};
  std::vector<double> vb = {1.0, 0.25, -0.6, 0.1};
  Functional a = Functional::from_table(2, va);
  Functional b = Functional::from_table(2, vb);
  Functional ab = product(a, b);
  for (std::size_t mask = 0; mask < 4; ++mask) {
    Configuration c = Configuration::from_mask(2, mask);
    for (int k = 0; k < 2; ++k) {
      const double da = gradient_value(space, a, c, k);
      const double db = gradient_value(space, b, c, k);
      const double dab = gradient_value(space, ab, c, k);
      const double x_over_sigma = c.sign(k) / space.sigma(k);
      CHECK(dab == doctest::Approx(da * b(c) + a(c) * db - x_over_sigma * da * db)
                       .epsilon(1e-13));
    }
  }
}

TEST_CASE("enumerated distribution is sorted and sums to one") {
  RademacherSpace space({0.25, 0.5, 0.8});
  std::vector<double> vals = {3, 1, 4, 1, 5, 9, 2, 6};
  Functional f = Functional::from_table(3, vals);
  const auto dist = enumerate_distribution(space, f);
  double total = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    total += dist[i].second;
    if (i) CHECK(dist[i].first > dist[i - 1].first);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  // Ties (value 1 twice) must have merged.
  std::set<double> support(vals.begin(), vals.end());
  CHECK(dist.size() == support.size());
}

TEST_CASE("enumeration refuses index counts beyond the cap") {
  RademacherSpace space(25, 0.5);
  Functional f = Functional::constant(25, 1.0);
  CHECK_THROWS_AS(expectation_exact(space, f), cap_error);
  CHECK(expectation_exact(space, f, 25) == doctest::Approx(1.0));
}

TEST_CASE("counter rng is deterministic and uniform in [0,1)") {
  CHECK(rng::uniform(1, 2, 3) == rng::uniform(1, 2, 3));
  CHECK(rng::uniform(1, 2, 3) != rng::uniform(1, 2, 4));
  CHECK(rng::uniform(1, 2, 3) != rng::uniform(2, 2, 3));
  double mean = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng::uniform(7, 0, i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    mean += u;
  }
  mean /= 10000;
  CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / 10000));
}

TEST_CASE("sampled coordinate frequencies match their probabilities") {
  RademacherSpace space({0.2, 0.5, 0.85});
  const std::size_t n = 20000;
  std::array<int, 3> counts{};
  for (std::size_t i = 0; i < n; ++i) {
    const Configuration c = sample_configuration(space, i, 99);
    for (int k = 0; k < 3; ++k) counts[k] += c.get(k);
  }
  for (int k = 0; k < 3; ++k) {
    const double p = space.p(k);
    const double z = (counts[k] / static_cast<double>(n) - p) /
                     std::sqrt(p * (1 - p) / static_cast<double>(n));
    CHECK(std::abs(z) < 4.0);
  }
}

TEST_CASE("monte carlo stats agree with enumeration within four sigma") {
  RademacherSpace space({0.3, 0.6, 0.5, 0.7});
  std::vector<double> vals(16);
  for (int i = 0; i < 16; ++i) vals[i] = std::sin(i * 1.3) * 2.0;
  Functional f = Functional::from_table(4, vals);
  const auto [mean, sd] = exact_mean_stddev(space, f);
  SampleSpec spec;
  spec.count = 50000;
  spec.seed = 5;
  const FunctionalStats stats = estimate_functional_stats(space, f, spec);
  CHECK(std::abs(stats.mean.value - mean) < 4.0 * stats.mean.stderr_);
  CHECK(std::abs(stats.variance.value - sd * sd) < 4.0 * stats.variance.stderr_);
}

TEST_CASE("chunk layout is independent of the worker count") {
  const std::size_t n = 1237;
  const int chunks = 17;
  auto run = [&](int threads) {
    std::vector<int> owner(n, -1);
    parallel_chunks(n, chunks, threads, [&](int chunk, std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) owner[i] = chunk;
    });
    return owner;
  };
  const auto base = run(1);
  for (std::size_t i = 0; i < n; ++i) CHECK(base[i] >= 0);
  CHECK(run(2) == base);
  CHECK(run(8) == base);
}
