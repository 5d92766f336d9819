#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "rdpaudit/divergence.hpp"
#include "rdpaudit/rng.hpp"

using namespace rdpaudit;

namespace {

double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

Density make_normal(double mu, double sigma) {
  return [mu, sigma](double x) { return normal_pdf(x, mu, sigma); };
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("renyi_gaussian closed form") {
  CHECK(renyi_gaussian(0, 0, 1, Order(2)) == 0.0);
  CHECK(renyi_gaussian(1, 0, 1, Order(2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(renyi_gaussian(1, 0, 1, Order(1.25)) ==
        doctest::Approx(0.625).epsilon(1e-12));
  CHECK_THROWS_AS(renyi_gaussian(0, 0, 0.0, Order(2)), std::domain_error);
  CHECK_THROWS_AS(renyi_gaussian(0, 0, -1.0, Order(2)), std::domain_error);
}

TEST_CASE("renyi_gaussian agrees with quadrature oracle") {
  const QuadratureGrid grid{-10.0, 11.0, 1e-3};
  const double numeric = renyi_numeric_oracle(make_normal(1, 1),
                                              make_normal(0, 1), Order(2), grid);
  CHECK(std::abs(numeric - renyi_gaussian(1, 0, 1, Order(2))) < 1e-5);
  const double numeric125 = renyi_numeric_oracle(
      make_normal(1, 1), make_normal(0, 1), Order(1.25), grid);
  CHECK(std::abs(numeric125 - renyi_gaussian(1, 0, 1, Order(1.25))) < 1e-6);
}

TEST_CASE("renyi_bernoulli closed form") {
  CHECK(renyi_bernoulli(0.5, 0.5, Order(2)) == doctest::Approx(0.0).epsilon(1e-15));
  // Direct two-outcome sum, hand-checkable.
  const double expected = std::log(0.81 / 0.1 + 0.01 / 0.9);
  CHECK(renyi_bernoulli(0.9, 0.1, Order(2)) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(renyi_bernoulli(0.0, 0.5, Order(2)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("renyi_bernoulli infinite-divergence signal") {
  CHECK(renyi_bernoulli(0.5, 0.0, Order(2)) == kInf);
  CHECK(renyi_bernoulli(0.5, 1.0, Order(2)) == kInf);
  CHECK(renyi_bernoulli(0.0, 0.0, Order(2)) == 0.0);
  CHECK(renyi_bernoulli(1.0, 1.0, Order(2)) == 0.0);
  CHECK_THROWS_AS(renyi_bernoulli(-0.1, 0.5, Order(2)), std::domain_error);
}

TEST_CASE("plugin_estimate basics") {
  SampleSet s{{0.3, -0.7, 1.1, 0.0}, "q"};
  SUBCASE("zero log ratio collapses to zero divergence") {
    const auto est = plugin_estimate(s, [](double) { return 0.0; }, Order(2));
    CHECK(est.d_hat == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(est.z_hat == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("single sample with L = c gives d_hat = 2c at alpha 2") {
    SampleSet one{{4.2}, "q"};
    const double c = 0.8;
    const auto est = plugin_estimate(one, [c](double) { return c; }, Order(2));
    CHECK(est.d_hat == doctest::Approx(2.0 * c).epsilon(1e-12));
  }
  SUBCASE("empty set rejected") {
    SampleSet empty{{}, "q"};
    CHECK_THROWS_AS(
        plugin_estimate(empty, [](double) { return 0.0; }, Order(2)),
        std::invalid_argument);
  }
}

TEST_CASE("plugin_estimate recovers the gaussian ground truth") {
  // 1e5 samples from Q = N(0,1), L for N(1,1)||N(0,1): L(x) = x - 1/2.
  Rng rng(20260711);
  SampleSet q{{}, "N(0,1)"};
  q.values.reserve(100000);
  for (int i = 0; i < 100000; ++i) q.values.push_back(rng.normal());
  const auto est =
      plugin_estimate(q, [](double x) { return x - 0.5; }, Order(2));
  CHECK(est.d_hat > 0.9);
  CHECK(est.d_hat < 1.1);
}

TEST_CASE("numeric oracle sanity") {
  const QuadratureGrid grid{-10.0, 11.0, 1e-3};
  SUBCASE("identical densities") {
    const double v = renyi_numeric_oracle(make_normal(0, 1), make_normal(0, 1),
                                          Order(2), grid);
    CHECK(std::abs(v) < 1e-8);
  }
  SUBCASE("gaussian pair hits closed form") {
    const double v = renyi_numeric_oracle(make_normal(1, 1), make_normal(0, 1),
                                          Order(2), grid);
    CHECK(std::abs(v - 1.0) < 1e-5);
  }
  SUBCASE("two-point masses reduce to the bernoulli formula") {
    const double p = 0.85, q = 0.2;
    const std::vector<double> pm{1.0 - p, p}, qm{1.0 - q, q};
    const double discrete = renyi_discrete(pm, qm, Order(2));
    CHECK(std::abs(discrete - renyi_bernoulli(p, q, Order(2))) < 1e-12);
  }
  SUBCASE("divergent integrand signals infinity") {
    const Density truncated = [](double x) {
      return x < 0.0 ? 0.0 : 2.0 * normal_pdf(x, 0, 1);
    };
    CHECK(renyi_numeric_oracle(make_normal(0, 1), truncated, Order(2), grid) ==
          kInf);
  }
}

TEST_CASE("divergence nonnegativity and monotonicity in alpha") {
  const std::vector<double> alphas{1.05, 1.25, 1.5, 2.0, 4.0};
  Rng rng(7111);
  for (int trial = 0; trial < 50; ++trial) {
    const double mu_p = rng.uniform(-2, 2);
    const double mu_q = rng.uniform(-2, 2);
    const double sigma = rng.uniform(0.5, 2.0);
    double prev = -1.0;
    for (double a : alphas) {
      const double v = renyi_gaussian(mu_p, mu_q, sigma, Order(a));
      CHECK(v >= 0.0);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
    const double p = rng.uniform(0.0, 1.0);
    const double q = rng.uniform(0.05, 0.95);
    prev = -1.0;
    for (double a : alphas) {
      const double v = renyi_bernoulli(p, q, Order(a));
      CHECK(v >= -1e-12);
      CHECK(v >= prev - 1e-9);
      prev = v;
    }
  }
}

TEST_CASE("closed forms agree with the numeric oracle on random draws") {
  Rng rng(90125);
  for (int trial = 0; trial < 50; ++trial) {
    const double mu_p = rng.uniform(-1.5, 1.5);
    const double mu_q = rng.uniform(-1.5, 1.5);
    const double sigma = rng.uniform(0.6, 1.8);
    const double a = rng.uniform(1.05, 2.5);
    // Grid kept inside the region where neither density underflows to zero.
    const QuadratureGrid grid{-12.0, 12.0, 1e-3};
    const double numeric = renyi_numeric_oracle(
        make_normal(mu_p, sigma), make_normal(mu_q, sigma), Order(a), grid);
    CHECK(std::abs(numeric - renyi_gaussian(mu_p, mu_q, sigma, Order(a))) <
          1e-5);
  }
  for (int trial = 0; trial < 50; ++trial) {
    const double p = rng.uniform(0.0, 1.0);
    const double q = rng.uniform(0.02, 0.98);
    const double a = rng.uniform(1.05, 3.0);
    const std::vector<double> pm{1.0 - p, p}, qm{1.0 - q, q};
    CHECK(std::abs(renyi_discrete(pm, qm, Order(a)) -
                   renyi_bernoulli(p, q, Order(a))) < 1e-5);
  }
}

TEST_CASE("plugin estimator is consistent as n grows") {
  // Median |error| over 10 seeds must fall strictly along the size grid.
  const std::vector<std::size_t> sizes{1000, 10000, 100000, 1000000};
  const double truth = renyi_gaussian(1, 0, 1, Order(2));
  std::vector<double> medians;
  for (std::size_t n : sizes) {
    std::vector<double> errs;
    for (int seed = 0; seed < 10; ++seed) {
      Rng rng(derive_seed(555, {static_cast<std::uint64_t>(seed)}));
      SampleSet q{{}, "q"};
      q.values.reserve(n);
      for (std::size_t i = 0; i < n; ++i) q.values.push_back(rng.normal());
      const auto est =
          plugin_estimate(q, [](double x) { return x - 0.5; }, Order(2));
      errs.push_back(std::abs(est.d_hat - truth));
    }
    std::sort(errs.begin(), errs.end());
    medians.push_back(0.5 * (errs[4] + errs[5]));
  }
  for (std::size_t i = 1; i < medians.size(); ++i) {
    CHECK(medians[i] < medians[i - 1]);
  }
}
