#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include "fdl/kernel.hpp"
#include "fdl/quadrature.hpp"

using namespace fdl;

namespace {

// Gamma closed form evaluated with Boost's gamma functions.
double kernel_oracle(double s, double h, long m) {
  if (m == 0) return 0.0;
  const double M = static_cast<double>(std::abs(m));
  return std::pow(4.0, s) * boost::math::tgamma(0.5 + s) / (std::sqrt(std::numbers::pi) *
         std::abs(boost::math::tgamma(-s))) * boost::math::tgamma_ratio(M - s, M + 1.0 + s) / std::pow(h, 2.0 * s);
}

// sum over m != 0 of the 1D kernel = (2 pi)^{-1} int (4 sin^2(xi/2))^s over a period (h = 1).
double total_mass_oracle(double s) {
  const auto r = integrate_gk([s](double xi) { return std::pow(4.0 * std::sin(0.5 * xi) * std::sin(0.5 * xi), s); },
                              -std::numbers::pi, std::numbers::pi);
  return r.value / (2.0 * std::numbers::pi);
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("closed form hand values at s = 1/2") {
  const FracParams p(0.5, 1.0, 1);
  CHECK(kernel_1d(p, 0) == 0.0);
  CHECK(std::abs(kernel_1d(p, 1) - 4.0 / (3.0 * std::numbers::pi)) <= 1e-13);
  CHECK(std::abs(kernel_1d(p, 2) - 4.0 / (15.0 * std::numbers::pi)) <= 1e-13);
  CHECK(std::abs(kernel_1d(p, 3) - 4.0 / (35.0 * std::numbers::pi)) <= 1e-13);
  CHECK(kernel_1d(p, -1) == kernel_1d(p, 1));
}

TEST_CASE("closed form against the Boost gamma oracle") {
  for (double s : {0.1, 0.25, 0.5, 0.75, 0.95}) {
    for (double h : {1.0, 0.1, 0.013}) {
      const FracParams p(s, h, 1);
      for (long m : {1L, 2L, 9L, 100L, 12345L}) {
        CHECK(kernel_1d(p, m) == doctest::Approx(kernel_oracle(s, h, m)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("mesh scaling is exact") {
  for (double s : {0.3, 0.6}) {
    for (long m : {1L, 4L, 50L}) {
      const double ratio = kernel_1d(FracParams(s, 0.25, 1), m) / kernel_1d(FracParams(s, 1.0, 1), m);
      CHECK(ratio == doctest::Approx(std::pow(0.25, -2.0 * s)).epsilon(1e-14));
    }
  }
}

TEST_CASE("asymptotic ratio K(m)/K(2m)") {
  for (double s : {0.25, 0.5, 0.75}) {
    const FracParams p(s, 1.0, 1);
    CHECK(kernel_1d(p, 512) / kernel_1d(p, 1024) == doctest::Approx(std::pow(2.0, 1.0 + 2.0 * s)).epsilon(0.01));
  }
}

TEST_CASE("semigroup quadrature reproduces the closed form in 1D") {
  for (double s : {0.25, 0.5, 0.75}) {
    for (double h : {1.0, 0.1}) {
      const FracParams p(s, h, 1);
      for (long m = 1; m <= 20; ++m) {
        const Site site{m};
        const KernelValue k = kernel_nd(p, site, 1e-10);
        CHECK(std::abs(k.value - kernel_1d(p, m)) <= 1e-8 * kernel_1d(p, m));
        CHECK(k.abs_err >= 0.0);
      }
    }
  }
}

TEST_CASE("kernel symmetry and positivity in 2D and 3D") {
  const FracParams p(0.3, 1.0, 2);
  const double a = kernel_nd(p, Site{2, -3}).value;
  CHECK(a > 0.0);
  CHECK(kernel_nd(p, Site{2, 3}).value == doctest::Approx(a).epsilon(1e-12));
  CHECK(kernel_nd(p, Site{-2, 3}).value == doctest::Approx(a).epsilon(1e-12));
  CHECK(kernel_nd(p, Site{3, 2}).value == doctest::Approx(a).epsilon(1e-12));
  CHECK_THROWS_AS((void)kernel_nd(p, Site{0, 0}), precondition_error);
  const FracParams q(0.6, 0.5, 3);
  CHECK(kernel_nd(q, Site{1, 2, 0}).value > 0.0);
  CHECK(kernel_nd(q, Site{1, 2, 0}).value == doctest::Approx(kernel_nd(q, Site{0, -1, 2}).value).epsilon(1e-12));
}

TEST_CASE("explicit upper bound holds for d = 2, 3") {
  for (int d : {2, 3}) {
    for (double s : {0.25, 0.5, 0.75}) {
      const FracParams p(s, 1.0, d);
      Site m(static_cast<std::size_t>(d), 0);
      for (long a = 0; a <= 12; ++a) {
        for (long b = 0; a + b <= 12; ++b) {
          m[0] = a;
          m[1] = b;
          if (d == 3) m[2] = (a + b) % 3 == 0 ? 1 : 0;
          const long l1 = l1_norm(m);
          if (l1 == 0 || l1 > 12) continue;
          CHECK(kernel_nd(p, m).value <= kernel_upper_bound(p, l1));
        }
      }
    }
  }
}

TEST_CASE("telescoping tail sum") {
  const FracParams p(0.5, 1.0, 1);
  CHECK(kernel_tail_sum_1d(p, 1) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-14));
  double partial = 0.0;
  for (long m = 1; m <= 1000000; ++m) partial += kernel_1d(p, m);
  CHECK(std::abs(partial + kernel_tail_sum_1d(p, 1000001) - kernel_tail_sum_1d(p, 1)) <= 1e-12);
  CHECK(std::abs(partial - kernel_tail_sum_1d(p, 1)) <= 1e-6);
  for (double s : {0.2, 0.5, 0.8}) {
    const FracParams q(s, 1.0, 1);
    for (long M = 1; M <= 50; ++M) {
      CHECK(kernel_tail_sum_1d(q, M) - kernel_tail_sum_1d(q, M + 1) ==
            doctest::Approx(kernel_1d(q, M)).epsilon(1e-11));
    }
    const double c1 = kernel_tail_sum_1d(q, 5000) * std::pow(5000.0, 2.0 * s);
    const double c2 = kernel_tail_sum_1d(q, 10000) * std::pow(10000.0, 2.0 * s);
    CHECK(c1 / c2 == doctest::Approx(1.0).epsilon(0.01));
  }
}

TEST_CASE("total mass matches the symbol average") {
  for (double s : {0.25, 0.5, 0.75}) {
    const double mass = kernel_total_mass(FracParams(s, 1.0, 1));
    CHECK(mass == doctest::Approx(total_mass_oracle(s)).epsilon(1e-11));
  }
}

TEST_CASE("l1 tail bound dominates an explicit shell sum") {
  const FracParams p(0.5, 1.0, 2);
  const long radius = 6;
  double shell = 0.0;
  for (long a = -30; a <= 30; ++a) {
    for (long b = -30; b <= 30; ++b) {
      const long l1 = std::abs(a) + std::abs(b);
      if (l1 > radius && l1 <= 30) shell += kernel_nd(p, Site{a, b}, 1e-8).value;
    }
  }
  CHECK(kernel_l1_tail_bound(p, radius) >= shell);
}

TEST_CASE("lattice heat kernel") {
  CHECK(heat_kernel(Site{0}, 0.0) == 1.0);
  CHECK(heat_kernel(Site{3, -1}, 0.7) == heat_kernel(Site{-3, 1}, 0.7));
  for (double t : {0.1, 1.0, 2.0}) {
    for (int d : {1, 2}) {
      double mass = 0.0;
      if (d == 1) {
        for (long a = -60; a <= 60; ++a) mass += heat_kernel(Site{a}, t);
      } else {
        for (long a = -60; a <= 60; ++a) {
          for (long b = -60; b <= 60; ++b) mass += heat_kernel(Site{a, b}, t);
        }
      }
      CHECK(std::abs(mass - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("torus heat kernel: unit mass and Poisson summation") {
  const long N = 8;
  const double h = torus_mesh(N);
  double mass = 0.0;
  for (long j = -N; j <= N; ++j) mass += torus_heat_kernel(N, h, Site{j}, 0.5);
  CHECK(std::abs(mass - 1.0) <= 1e-12);
  for (double t : {0.1, 1.0, 5.0}) {
    for (long j = -N; j <= N; ++j) {
      CHECK(std::abs(torus_heat_kernel(N, h, Site{j}, t) - torus_heat_kernel_spectral(N, h, Site{j}, t)) <= 1e-10);
    }
  }
  CHECK(torus_heat_kernel(N, h, Site{0}, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("periodized kernel in 1D: series, partial sums and heat integral agree") {
  for (double s : {0.3, 0.5, 0.7}) {
    const long N = 5;
    const FracParams p(s, torus_mesh(N), 1);
    for (long j = 1; j <= N; ++j) {
      const double series = torus_kernel(p, N, Site{j});
      const double generic = torus_kernel_heat_integral(p, N, Site{j});
      CHECK(std::abs(series - generic) <= 1e-10 * series);
      CHECK(torus_kernel(p, N, Site{-j}) == doctest::Approx(series).epsilon(1e-14));
      CHECK(series >= kernel_1d(p, j));
      // the explicit partial sums approach the full series from below
      const double p100 = torus_kernel_1d_partial(p, N, j, 100);
      const double p1000 = torus_kernel_1d_partial(p, N, j, 1000);
      CHECK(p100 < p1000);
      CHECK(p1000 < series);
    }
  }
}

TEST_CASE("periodized kernel in 2D is symmetric and dominates the lattice kernel") {
  const long N = 4;
  const FracParams p(0.5, torus_mesh(N), 2);
  const double a = torus_kernel(p, N, Site{1, 2});
  CHECK(a == doctest::Approx(torus_kernel(p, N, Site{-1, -2})).epsilon(1e-12));
  CHECK(a == doctest::Approx(torus_kernel(p, N, Site{2, 1})).epsilon(1e-12));
  CHECK(a > kernel_nd(p, Site{1, 2}).value);
}

TEST_CASE("KernelTable caches quadrature values") {
  const FracParams p(0.4, 1.0, 2);
  const KernelTable table(p, 6);
  CHECK(table(Site{0, 0}) == 0.0);
  for (long a = -6; a <= 6; a += 3) {
    for (long b = -6; b <= 6; b += 2) {
      if (a == 0 && b == 0) continue;
      CHECK(table(Site{a, b}) == doctest::Approx(kernel_nd(p, Site{a, b}).value).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS((void)table(Site{7, 0}), precondition_error);
}

}  // TEST_SUITE
