#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include "fdl/errors.hpp"
#include "fdl/quadrature.hpp"
#include "fdl/specfun.hpp"

using namespace fdl;

TEST_SUITE("specfun") {

TEST_CASE("log_gamma at small integers and one half") {
  CHECK(std::abs(log_gamma(1.0)) <= 1e-15);
  CHECK(std::abs(log_gamma(2.0)) <= 1e-15);
  CHECK(std::abs(log_gamma(0.5) - 0.5 * std::log(std::numbers::pi)) <= 1e-13);
}

TEST_CASE("log_gamma agrees with Boost over a wide range") {
  for (double x : {1e-6, 0.01, 0.3, 0.75, 1.5, 3.25, 9.9, 27.0, 150.5, 1e4, 1e7}) {
    const double ref = boost::math::lgamma(x);
    CHECK(std::abs(log_gamma(x) - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("log_gamma rejects nonpositive arguments") {
  CHECK_THROWS_AS(log_gamma(0.0), domain_error);
  CHECK_THROWS_AS(log_gamma(-2.5), domain_error);
}

TEST_CASE("gamma_ratio") {
  CHECK(gamma_ratio(1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gamma_ratio(3.5, 1.5) == doctest::Approx(2.5 * 1.5).epsilon(1e-14));
  const double m = 1e4;
  CHECK(gamma_ratio(m - 0.5, m + 1.5) * std::pow(m, 2.0) == doctest::Approx(1.0).epsilon(0.01));
  const std::pair<double, double> pairs[] = {{0.2, 0.7}, {4.0, 9.0}, {0.2, 9.0}, {250.0, 251.5}, {1e5 - 0.3, 1e5 + 1.3}};
  for (const auto& [a, b] : pairs) {
    CHECK(gamma_ratio(a, b) == doctest::Approx(boost::math::tgamma_ratio(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("log_abs_gamma_neg matches the direct evaluation") {
  for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    CHECK(log_abs_gamma_neg(s) == doctest::Approx(std::log(std::abs(boost::math::tgamma(-s)))).epsilon(1e-13));
  }
}

TEST_CASE("bessel_i_scaled") {
  CHECK(bessel_i_scaled(0, 0.0) == 1.0);
  CHECK(bessel_i_scaled(3, 0.0) == 0.0);
  CHECK(bessel_i_scaled(-3, 7.2) == bessel_i_scaled(3, 7.2));
  const double t = 1e4;
  CHECK(bessel_i_scaled(0, t) * std::sqrt(2.0 * std::numbers::pi * t) == doctest::Approx(1.0).epsilon(0.005));
  for (long n : {0L, 1L, 2L, 7L, 30L, 120L}) {
    for (double x : {0.01, 0.5, 4.0, 37.0, 400.0}) {
      const double ref = boost::math::cyl_bessel_i(static_cast<double>(n), x) * std::exp(-x);
      if (ref < 1e-290) continue;
      CHECK(bessel_i_scaled(n, x) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("bessel_i_scaled_sequence matches single evaluations") {
  const auto seq = bessel_i_scaled_sequence(40, 13.0);
  REQUIRE(seq.size() == 41);
  for (long k = 0; k <= 40; ++k) {
    CHECK(seq[static_cast<std::size_t>(k)] == doctest::Approx(bessel_i_scaled(k, 13.0)).epsilon(1e-13));
  }
}

TEST_CASE("bessel_k half-integer closed form") {
  for (double x : {0.1, 1.0, 10.0}) {
    const double exact = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
    CHECK(bessel_k(0.5, x) == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("bessel_k small-argument limit and Boost agreement") {
  const double x = 1e-6;
  for (double s : {0.6, 0.8}) {
    CHECK(std::pow(x, s) * bessel_k(s, x) * std::pow(2.0, 1.0 - s) / std::tgamma(s) ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
  for (double s : {0.2, 0.5, 0.6, 0.8}) {
    // two leading terms of the small-argument series
    const double series = 0.5 * std::tgamma(s) * std::pow(0.5 * x, -s) + 0.5 * std::tgamma(-s) * std::pow(0.5 * x, s);
    CHECK(bessel_k(s, x) == doctest::Approx(series).epsilon(1e-9));
    for (double y : {1e-3, 0.3, 2.0, 25.0, 300.0}) {
      const double value = bessel_k(s, y);
      CHECK(value > 0.0);
      CHECK(value == doctest::Approx(boost::math::cyl_bessel_k(s, y)).epsilon(1e-11));
    }
  }
  CHECK_THROWS_AS(bessel_k(1.2, 1.0), domain_error);
  CHECK_THROWS_AS(bessel_k(0.5, 0.0), domain_error);
}

TEST_CASE("extension profile") {
  CHECK(extension_profile(0.3, 0.0) == 1.0);
  for (double x : {0.01, 1.0, 5.0}) {
    CHECK(extension_profile(0.5, x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
    // d/dx e^{-x}
    CHECK(extension_profile_weighted_slope(0.5, x) == doctest::Approx(-std::exp(-x)).epsilon(1e-10));
  }
}

}  // TEST_SUITE

TEST_SUITE("quadrature") {

TEST_CASE("Gauss-Kronrod on smooth integrands") {
  const auto r = integrate_gk([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
  const auto peak = integrate_gk([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0);
  CHECK(peak.value == doctest::Approx(2.0 / 1e-2 * std::atan(1.0 / 1e-2)).epsilon(1e-11));
}

TEST_CASE("endpoint singular rule") {
  const auto r = integrate_endpoint_singular([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-11));
  const auto log_sing = integrate_endpoint_singular([](double x) { return std::log(x); }, 0.0, 1.0);
  CHECK(log_sing.value == doctest::Approx(-1.0).epsilon(1e-11));
}

TEST_CASE("unreachable tolerance is reported") {
  QuadratureOptions opts;
  opts.rel_tol = 1e-15;
  opts.max_depth = 2;
  CHECK_THROWS_AS(integrate_gk([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, opts),
                  tolerance_failure);
}

}  // TEST_SUITE
