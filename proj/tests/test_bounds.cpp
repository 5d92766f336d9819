#include <cmath>
#include <vector>

#include "doctest.h"
#include "rdpaudit/accounting.hpp"
#include "rdpaudit/bounds.hpp"
#include "rdpaudit/rng.hpp"

using namespace rdpaudit;

TEST_CASE("markov_lower_bound arithmetic") {
  CHECK(markov_lower_bound(3.0, Order(2), 1.0 / std::exp(1.0)).lower ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(markov_lower_bound(3.0, Order(2), 0.05).lower ==
        doctest::Approx(3.0 - std::log(20.0)).epsilon(1e-12));
  // Negative results are reported unchanged.
  CHECK(markov_lower_bound(3.0, Order(1.25), 0.05).lower ==
        doctest::Approx(3.0 - 4.0 * std::log(20.0)).epsilon(1e-12));
  CHECK_THROWS_AS(markov_lower_bound(1.0, Order(2), 0.0), std::domain_error);
  CHECK_THROWS_AS(markov_lower_bound(1.0, Order(2), 1.0), std::domain_error);
  CHECK_THROWS_AS(markov_lower_bound(1.0, Order(0.5), 0.05), std::domain_error);
}

TEST_CASE("hoeffding_upper_bound arithmetic") {
  // z=1, B=0, alpha=2, n=200, beta=0.05: log(1 + sqrt(log(40)/400)).
  CHECK(hoeffding_upper_bound(1.0, 200, 0.0, Order(2), 0.05).upper ==
        doctest::Approx(std::log(1.0 + std::sqrt(std::log(40.0) / 400.0)))
            .epsilon(1e-12));
  // z=e^2, B=1, alpha=2, n=800, beta=0.1.
  const double e2 = std::exp(2.0);
  CHECK(hoeffding_upper_bound(e2, 800, 1.0, Order(2), 0.1).upper ==
        doctest::Approx(std::log(e2 + e2 * std::sqrt(std::log(20.0) / 1600.0)))
            .epsilon(1e-12));
  // Enormous n drives the bound to the exact value (0 for z = 1).
  CHECK(hoeffding_upper_bound(1.0, 4000000000000LL, 0.0, Order(2), 0.05).upper ==
        doctest::Approx(0.0).epsilon(1e-6));
  CHECK_THROWS_AS(hoeffding_upper_bound(1.0, 0, 0.0, Order(2), 0.05),
                  std::domain_error);
}

TEST_CASE("hoeffding_lower_bound arithmetic") {
  // The max{1, .} floor keeps the bound at 0 whenever z_hat <= 1.
  CHECK(hoeffding_lower_bound(0.7, 100, 0.0, Order(2), 0.05).lower == 0.0);
  CHECK(hoeffding_lower_bound(2.0, 50, 0.0, Order(2), 0.05).lower ==
        doctest::Approx(std::log(2.0 - std::sqrt(std::log(20.0) / 100.0)))
            .epsilon(1e-12));
  // Deviation larger than z_hat - 1 reactivates the floor.
  CHECK(hoeffding_lower_bound(1.5, 10, 2.0, Order(2), 0.05).lower == 0.0);
}

TEST_CASE("dv_ci_radius formula and monotonicity") {
  const CriticClassSpec spec{10, 1.0, 1.0, 1.0};
  const double C = 4.0 * std::exp(4.0);
  CHECK(dv_radius_constant(Order(2), 1.0) == doctest::Approx(C).epsilon(1e-12));
  const double expected =
      C * (std::sqrt((10.0 * std::log(1000.0) + std::log(20.0)) / 1e6) + 1e-3);
  CHECK(dv_ci_radius(1000000, spec, Order(2), 0.05, 1e-3) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(2.0724581211409542).epsilon(1e-12));

  SUBCASE("radius vanishes as n grows with eta = n^{-1/2}") {
    double prev = 1e300;
    for (std::int64_t n : {100LL, 10000LL, 1000000LL, 100000000LL}) {
      const double r = dv_ci_radius(n, spec, Order(2), 0.05, 0.0);
      CHECK(r < prev);
      prev = r;
    }
    CHECK(prev < 0.5);
  }
  SUBCASE("doubling d increases the radius") {
    CriticClassSpec wide = spec;
    wide.d = 20;
    CHECK(dv_ci_radius(10000, wide, Order(2), 0.05, 1e-3) >
          dv_ci_radius(10000, spec, Order(2), 0.05, 1e-3));
  }
  SUBCASE("eta >= K rejected") {
    CHECK_THROWS_AS(dv_ci_radius(100, spec, Order(2), 0.05, 1.0),
                    std::domain_error);
  }
}

TEST_CASE("dv_certificate") {
  const ConfidenceBound cb = dv_certificate(1.2, 0.3, 0.05);
  CHECK(cb.lower == doctest::Approx(0.9));
  CHECK(cb.upper == doctest::Approx(1.5));
  CHECK(cb.level == doctest::Approx(0.95));
  CHECK(dv_certificate(0.4, 0.0, 0.05).lower == doctest::Approx(0.4));
  CHECK_THROWS_AS(dv_certificate(1.0, -0.1, 0.05), std::domain_error);
}

TEST_CASE("violation_epsilon") {
  CHECK(violation_epsilon(0.0, Order(2), 1.0 / std::exp(1.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(violation_epsilon(2.0, Order(2), 1e-5) ==
        doctest::Approx(2.0 + std::log(1e5)).epsilon(1e-12));
  // Same formula as the RDP -> DP conversion.
  CHECK(violation_epsilon(2.0, Order(2), 1e-5) ==
        doctest::Approx(rdp_to_approx_dp(Rdp{2.0, 2.0}, 1e-5).eps)
            .epsilon(1e-14));
}

TEST_CASE("hypothesis_test") {
  SUBCASE("matching estimate never rejects (positive correction)") {
    const AuditDecision d = hypothesis_test(1.0, 1.0, Order(2), 0.2);
    CHECK_FALSE(d.reject_null);
  }
  SUBCASE("large estimate rejects a small claim") {
    const AuditDecision d = hypothesis_test(5.0, 1.0, Order(2), 0.05);
    CHECK(d.sup_rejectable_epsilon == doctest::Approx(5.0 - std::log(20.0)));
    CHECK(d.reject_null);
  }
  SUBCASE("exactness over random tuples") {
    Rng rng(2024);
    for (int i = 0; i < 1000; ++i) {
      const double d_hat = rng.uniform(-2, 8);
      const double null_eps = rng.uniform(0, 6);
      const double beta = rng.uniform(0.01, 0.99);
      const double alpha = rng.uniform(1.1, 4.0);
      const AuditDecision d = hypothesis_test(d_hat, null_eps, Order(alpha), beta);
      CHECK(d.reject_null == (d.sup_rejectable_epsilon > null_eps));
      CHECK(d.sup_rejectable_epsilon ==
            doctest::Approx(d_hat - std::log(1.0 / beta) / (alpha - 1.0)));
    }
  }
  SUBCASE("rejection nests downward in the null epsilon") {
    const AuditDecision d2 = hypothesis_test(6.0, 2.5, Order(2), 0.05);
    REQUIRE(d2.reject_null);
    for (double smaller : {2.0, 1.0, 0.1}) {
      CHECK(hypothesis_test(6.0, smaller, Order(2), 0.05).reject_null);
    }
  }
}

TEST_CASE("required_samples planning") {
  const CriticClassSpec spec{100, 1.0, 0.25, 1.0};
  SUBCASE("floor arithmetic") {
    CHECK(required_samples(0.1, spec, Order(2), 0.05).n_floor == 10000);
  }
  SUBCASE("larger targets need fewer samples") {
    const auto tight = required_samples(0.05, spec, Order(2), 0.05);
    const auto loose = required_samples(0.5, spec, Order(2), 0.05);
    CHECK(loose.n_upper < tight.n_upper);
    CHECK(loose.n_floor < tight.n_floor);
  }
  SUBCASE("n_upper is the threshold sample size") {
    const auto plan = required_samples(0.2, spec, Order(2), 0.05);
    const auto radius = [&](std::uint64_t n) {
      return dv_ci_radius(static_cast<std::int64_t>(n), spec, Order(2), 0.05,
                          1.0 / std::sqrt(static_cast<double>(n)));
    };
    CHECK(radius(plan.n_upper) <= 0.2);
    CHECK(radius(plan.n_upper - 1) > 0.2);
  }
  SUBCASE("upper bound dominates the floor on random specs") {
    Rng rng(77);
    for (int i = 0; i < 20; ++i) {
      CriticClassSpec s;
      s.d = 1 + static_cast<int>(rng.below(50));
      s.K = rng.uniform(0.5, 4.0);
      s.M = rng.uniform(0.1, 1.0);
      s.lipschitz = 1.0;
      const double target = rng.uniform(0.05, 1.0);
      const double alpha = rng.uniform(1.25, 3.0);
      const auto plan = required_samples(target, s, Order(alpha), 0.05);
      CHECK(plan.n_upper >= plan.n_floor);
    }
  }
}
