#include <cmath>
#include <vector>

#include "doctest.h"
#include "rdpaudit/accounting.hpp"
#include "rdpaudit/rng.hpp"

using namespace rdpaudit;

TEST_CASE("normal_cdf reference values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  // High-precision reference: Phi(1.96) = 0.97500210485177956...
  CHECK(std::abs(normal_cdf(1.96) - 0.975002104851779566) < 1e-10);
  CHECK(std::abs(normal_cdf(-1.0) - 0.158655253931457051) < 1e-10);
  Rng rng(42);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform(-8, 8);
    CHECK(normal_cdf(x) + normal_cdf(-x) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("log_normal_cdf matches direct log in the overlap region") {
  for (double x = -36.0; x <= -5.0; x += 0.5) {
    const double direct = std::log(normal_cdf(x));
    CHECK(log_normal_cdf(x) == doctest::Approx(direct).epsilon(1e-8));
  }
  // Far tail where erfc underflows: finite and decreasing.
  CHECK(std::isfinite(log_normal_cdf(-60.0)));
  CHECK(log_normal_cdf(-60.0) < log_normal_cdf(-50.0));
}

TEST_CASE("rdp_to_approx_dp") {
  CHECK(rdp_to_approx_dp(Rdp{2.0, 0.0}, 1.0 / std::exp(1.0)).eps ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rdp_to_approx_dp(Rdp{2.0, 2.0}, 1e-5).eps ==
        doctest::Approx(2.0 + std::log(1e5)).epsilon(1e-12));
  // delta -> 1 recovers eps_alpha.
  CHECK(rdp_to_approx_dp(Rdp{2.0, 3.0}, 1.0 - 1e-12).eps ==
        doctest::Approx(3.0).epsilon(1e-9));
  CHECK_THROWS_AS(rdp_to_approx_dp(Rdp{1.0, 1.0}, 0.1), std::domain_error);
}

TEST_CASE("gdp_to_rdp reproduces the reference conversion lists") {
  const std::vector<double> mus{0.5, 1.0, std::sqrt(2.0), 2.0, std::sqrt(10.0)};
  const std::vector<double> eps2{0.25, 1.0, 2.0, 4.0, 10.0};
  const std::vector<double> eps125{0.15625, 0.625, 1.25, 2.5, 6.25};
  for (std::size_t i = 0; i < mus.size(); ++i) {
    CHECK(gdp_to_rdp(Gdp{mus[i]}, 2.0).eps_alpha ==
          doctest::Approx(eps2[i]).epsilon(1e-12));
    CHECK(gdp_to_rdp(Gdp{mus[i]}, 1.25).eps_alpha ==
          doctest::Approx(eps125[i]).epsilon(1e-12));
  }
  CHECK(gdp_to_rdp(Gdp{0.0}, 2.0).eps_alpha == 0.0);
}

TEST_CASE("gdp delta curve") {
  // Phi(0.5) - Phi(-0.5) = 0.3829249225...
  CHECK(std::abs(gdp_to_approx_dp_delta(Gdp{1.0}, 0.0) - 0.382924922548026207) <
        1e-10);
  // mu = 2, eps = 10: reference 9.94020e-6.
  CHECK(gdp_to_approx_dp_delta(Gdp{2.0}, 10.0) ==
        doctest::Approx(9.94020281611815e-6).epsilon(1e-9));
  CHECK(gdp_to_approx_dp_delta(Gdp{1.0}, 700.0) == 0.0);  // vanishing tail
  CHECK(gdp_to_approx_dp_delta(Gdp{0.0}, 1.0) == 0.0);    // degenerate mu
  // Large eps must not overflow through the e^eps factor.
  CHECK(std::isfinite(gdp_to_approx_dp_delta(Gdp{1.0}, 800.0)));
}

TEST_CASE("approx_dp_to_gdp inversion") {
  SUBCASE("round trip") {
    const double delta = gdp_to_approx_dp_delta(Gdp{1.3}, 3.0);
    CHECK(approx_dp_to_gdp(3.0, delta).mu == doctest::Approx(1.3).epsilon(1e-6));
  }
  SUBCASE("reference pairings at delta = 1e-5") {
    CHECK(std::abs(approx_dp_to_gdp(10.0, 1e-5).mu - 2.0) < 0.01);
    CHECK(std::abs(approx_dp_to_gdp(2.0, 1e-5).mu - 0.5) < 0.01);
  }
  SUBCASE("50-point identity grid") {
    Rng rng(1312);
    for (int i = 0; i < 50; ++i) {
      const double mu = rng.uniform(0.1, 6.0);
      const double eps = rng.uniform(0.0, 12.0);
      const double delta = gdp_to_approx_dp_delta(Gdp{mu}, eps);
      if (delta <= 0.0 || delta >= 1.0) continue;
      CHECK(approx_dp_to_gdp(eps, delta).mu == doctest::Approx(mu).epsilon(1e-6));
    }
  }
  SUBCASE("out-of-bracket request fails loudly") {
    CHECK_THROWS_AS(approx_dp_to_gdp(0.0, 1e-300), infeasible_error);
  }
}

TEST_CASE("conversion chain: rdp detour is lossier than the direct curve") {
  const std::vector<double> mus{0.5, 1.0, std::sqrt(2.0), 2.0, std::sqrt(10.0)};
  for (double mu : mus) {
    const Rdp rdp = gdp_to_rdp(Gdp{mu}, 2.0);
    const double eps_via_rdp = rdp_to_approx_dp(rdp, 1e-5).eps;
    // Direct curve: the eps with delta(eps) = 1e-5.
    double lo = 0.0, hi = 100.0;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (gdp_to_approx_dp_delta(Gdp{mu}, mid) > 1e-5) lo = mid;
      else hi = mid;
    }
    CHECK(eps_via_rdp >= lo);
  }
}

TEST_CASE("conversion monotonicity in the privacy-loss input") {
  double prev_eps = -1.0, prev_rdp = -1.0, prev_delta = -1.0;
  for (double mu = 0.1; mu <= 5.0; mu += 0.1) {
    const double rdp = gdp_to_rdp(Gdp{mu}, 2.0).eps_alpha;
    CHECK(rdp > prev_rdp);
    prev_rdp = rdp;
    const double delta = gdp_to_approx_dp_delta(Gdp{mu}, 1.0);
    CHECK(delta >= prev_delta);
    prev_delta = delta;
  }
  for (double e = 0.0; e <= 5.0; e += 0.25) {
    const double eps = rdp_to_approx_dp(Rdp{2.0, e}, 1e-5).eps;
    CHECK(eps > prev_eps);
    prev_eps = eps;
  }
}

TEST_CASE("group_privacy") {
  const Rdp base{8.0, 1.0};
  SUBCASE("c = 0 is the identity") {
    const Rdp g = group_privacy(base, 0);
    CHECK(g.alpha == 8.0);
    CHECK(g.eps_alpha == 1.0);
  }
  SUBCASE("c = 2 maps (8, 1) to (2, 9)") {
    const Rdp g = group_privacy(base, 2);
    CHECK(g.alpha == doctest::Approx(2.0));
    CHECK(g.eps_alpha == doctest::Approx(9.0));
  }
  SUBCASE("alpha below 2^(c+1) is rejected with the required order named") {
    try {
      group_privacy(Rdp{4.0, 1.0}, 2);
      FAIL("expected domain_error");
    } catch (const std::domain_error& e) {
      CHECK(std::string(e.what()).find("8") != std::string::npos);
    }
  }
}

TEST_CASE("guarantee parsing and printing") {
  CHECK(std::get<Rdp>(parse_guarantee("rdp:2,0.25")).eps_alpha == 0.25);
  CHECK(std::get<ApproxDp>(parse_guarantee("dp:10,1e-5")).delta == 1e-5);
  CHECK(std::get<Gdp>(parse_guarantee("gdp:1.4142")).mu == 1.4142);
  CHECK_THROWS_AS(parse_guarantee("rdp:2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_guarantee("nope:1,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_guarantee("rdp:0.5,1"), std::domain_error);
  CHECK(to_string(PrivacyGuarantee(Gdp{2.0})) == "2-GDP");
}
