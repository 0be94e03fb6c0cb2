#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include "fdl/extension.hpp"

using namespace fdl;

namespace {

TorusFunction random_torus(long N, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  TorusFunction v(N, d);
  for (double& x : v.values()) x = normal(rng);
  return v;
}

TorusFunction cosine_mode(long N, long k) {
  TorusFunction v(N, 1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v.values()[i] = std::cos(2.0 * std::numbers::pi * static_cast<double>(k * v.site(i)[0]) /
                             static_cast<double>(2 * N + 1));
  }
  return v;
}

}  // namespace

TEST_SUITE("extension") {

TEST_CASE("geometric grid") {
  const auto grid = geometric_grid(1e-6, 5.0, 1.05);
  CHECK(grid.front() == 1e-6);
  CHECK(grid.back() == 5.0);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) CHECK(grid[i] / grid[i - 1] == doctest::Approx(1.05));
  CHECK_THROWS_AS(geometric_grid(1.0, 0.5), precondition_error);
}

TEST_CASE("Dirichlet-to-Neumann constant") {
  CHECK(dtn_constant(0.5) == 1.0);
  for (double s : {0.2, 0.7}) {
    const double oracle = boost::math::tgamma(1.0 - s) / (std::pow(4.0, s - 0.5) * boost::math::tgamma(s));
    CHECK(dtn_constant(s) == doctest::Approx(oracle).epsilon(1e-13));
  }
}

TEST_CASE("extension at s = 1/2 is the Poisson semigroup") {
  const long N = 6;
  const long k = 2;
  const TorusFunction v = cosine_mode(N, k);
  const double root = std::sqrt(torus_symbol(N, Site{k}, 1.0));
  const std::vector<double> grid{0.0, 0.01, 0.5, 2.0};
  const ExtensionField field = cs_extend_torus(v, 0.5, grid);
  for (std::size_t level = 0; level < grid.size(); ++level) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(std::abs(field(level, i) - std::exp(-root * grid[level]) * v.values()[i]) <= 1e-12);
    }
  }
}

TEST_CASE("zero-height level reproduces the data and constants stay constant") {
  const TorusFunction v = random_torus(5, 2, 1);
  const std::vector<double> grid{0.0, 0.1, 1.0};
  const ExtensionField field = cs_extend_torus(v, 0.3, grid);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(field(0, i) - v.values()[i]) <= 1e-12);

  TorusFunction constant(4, 1);
  for (double& x : constant.values()) x = -2.0;
  const ExtensionField flat = cs_extend_torus(constant, 0.7, geometric_grid(1e-6, 3.0));
  for (std::size_t level = 0; level < flat.levels(); ++level) {
    for (std::size_t i = 0; i < constant.size(); ++i) CHECK(std::abs(flat(level, i) + 2.0) <= 1e-12);
  }
  const TorusFunction trace = neumann_trace(flat, 20);
  for (double x : trace.values()) CHECK(std::abs(x) <= 1e-10);
}

TEST_CASE("Neumann trace of a single mode at s = 1/2") {
  const long N = 6;
  const long k = 3;
  const TorusFunction v = cosine_mode(N, k);
  const double root = std::sqrt(torus_symbol(N, Site{k}, 1.0));
  const TorusFunction trace = neumann_trace(cs_extend_torus(v, 0.5, geometric_grid(1e-6, 5.0)), 20);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(trace.values()[i] - root * v.values()[i]) <= 1e-8);
}

TEST_CASE("Neumann trace matches the spectral operator for several orders") {
  for (double s : {0.3, 0.5, 0.7}) {
    for (int d : {1, 2}) {
      const TorusFunction v = random_torus(6, d, 17);
      const TorusFunction trace = neumann_trace(cs_extend_torus(v, s, geometric_grid(1e-6, 5.0)), 20);
      const TorusFunction ref = apply_frac_torus_spectral(v, s);
      double defect = 0.0;
      double scale = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        defect = std::max(defect, std::abs(trace.values()[i] - dtn_constant(s) * ref.values()[i]));
        scale = std::max(scale, std::abs(dtn_constant(s) * ref.values()[i]));
      }
      CHECK(defect <= 1e-4 * scale);
    }
  }
}

TEST_CASE("coarse grids are refused") {
  const TorusFunction v = random_torus(4, 1, 3);
  CHECK_THROWS_AS(neumann_trace(cs_extend_torus(v, 0.5, geometric_grid(1e-2, 5.0)), 20), precondition_error);
  CHECK_THROWS_AS(neumann_trace(cs_extend_torus(v, 0.5, geometric_grid(1e-6, 5.0)), 2), precondition_error);
}

TEST_CASE("half-ball norms") {
  // field = 1 everywhere; r below the mesh keeps one column of height r
  TorusFunction one(5, 1);
  for (double& x : one.values()) x = 1.0;
  const std::vector<double> grid{0.0, 0.05, 0.1, 0.2};
  const ExtensionField field = cs_extend_torus(one, 0.5, grid);
  const double center[] = {0.0};
  const double r = 0.15;
  const HalfBallNorms tiny = half_ball_norms(field, center, r);
  CHECK(tiny.bulk_l2 * tiny.bulk_l2 == doctest::Approx(one.h() * r).epsilon(1e-13));
  CHECK(tiny.trace_l2 * tiny.trace_l2 == doctest::Approx(one.h()).epsilon(1e-13));

  const TorusFunction v = random_torus(10, 1, 5);
  const ExtensionField bumpy = cs_extend_torus(v, 0.5, geometric_grid(1e-4, 3.0, 1.1));
  double previous = 0.0;
  for (double radius : {0.3, 0.8, 1.5, 2.5}) {
    const HalfBallNorms n = half_ball_norms(bumpy, center, radius);
    CHECK(n.bulk_l2 >= previous);
    previous = n.bulk_l2;
    // direct oracle for the trace part
    double trace = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double x = static_cast<double>(v.site(i)[0]) * v.h();
      if (x * x < radius * radius) trace += v.h() * v.values()[i] * v.values()[i];
    }
    CHECK(n.trace_l2 == doctest::Approx(std::sqrt(trace)).epsilon(1e-13));
    CHECK(n.trace_h1 >= n.trace_l2);
  }
}

TEST_CASE("boundary-bulk probe") {
  SUBCASE("zero data") {
    const BoundaryBulkReport r = boundary_bulk_probe(TorusFunction(31, 1));
    CHECK(r.bulk_small == 0.0);
    CHECK(r.bulk_big == 0.0);
    CHECK(r.trace_data == 0.0);
    CHECK(r.holds);
  }
  SUBCASE("random bumps at two meshes") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const BoundaryBulkReport coarse = boundary_bulk_probe(boundary_bulk_sample(31, seed));
      const BoundaryBulkReport fine = boundary_bulk_probe(boundary_bulk_sample(62, seed));
      for (const auto& r : {coarse, fine}) {
        CHECK_FALSE(r.degenerate);
        CHECK(r.fitted_alpha > 0.0);
        CHECK(r.fitted_alpha < 1.0);
        CHECK(r.holds);
        CHECK(r.bulk_small <= r.bulk_big);
      }
      CHECK(std::abs(coarse.raw_alpha - fine.raw_alpha) < 0.2);
    }
  }
  SUBCASE("geometry and sampling preconditions") {
    BoundaryBulkOptions options;
    options.r0 = 1.0;
    CHECK_THROWS_AS(boundary_bulk_probe(boundary_bulk_sample(31, 0), options), domain_error);
    CHECK_THROWS_AS(boundary_bulk_sample(20, 0), precondition_error);
  }
  SUBCASE("samples are supported in the half unit ball") {
    const TorusFunction f = boundary_bulk_sample(62, 9);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (std::abs(static_cast<double>(f.site(i)[0]) * f.h()) > 0.5) CHECK(f.values()[i] == 0.0);
    }
  }
}

}  // TEST_SUITE
