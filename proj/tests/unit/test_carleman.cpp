#include <cmath>
#include <random>

#include <doctest.h>

#include "fdl/carleman.hpp"

using namespace fdl;

namespace {

SparseValues random_sparse(int d, long radius, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  SparseValues v;
  if (d == 1) {
    for (long a = -radius; a <= radius; ++a) v[{a}] = normal(rng);
  } else {
    for (long a = -radius; a <= radius; ++a) {
      for (long b = -radius; b <= radius; ++b) v[{a, b}] = normal(rng);
    }
  }
  return v;
}

double relative_gap(const SparseValues& a, const SparseValues& b) {
  double gap = 0.0;
  double scale = 0.0;
  for (const auto& [j, x] : a) {
    const auto it = b.find(j);
    gap = std::max(gap, std::abs(x - (it == b.end() ? 0.0 : it->second)));
    scale = std::max(scale, std::abs(x));
  }
  return gap / scale;
}

}  // namespace

TEST_SUITE("carleman") {

TEST_CASE("weight") {
  CHECK(carleman_weight(1.0, 0.1, Site{0, 0}, 0.0) == 0.0);
  for (double t : {0.1, 0.5, 0.9}) {
    const double dt = (carleman_weight(2.0, 0.1, Site{0}, t + 1e-6) - carleman_weight(2.0, 0.1, Site{0}, t - 1e-6)) / 2e-6;
    CHECK(dt == doctest::Approx(2.0 * (t - 1.0)).epsilon(1e-8));
    CHECK(dt < 0.0);
  }
  CHECK(carleman_weight(1.0, 0.1, Site{3}, 0.2) < carleman_weight(1.0, 0.1, Site{2}, 0.2));
}

TEST_CASE("configuration preconditions") {
  CHECK_THROWS_AS(CarlemanConfig(1.0, 20.0, 0.1), precondition_error);
  CHECK_THROWS_AS(CarlemanConfig(-1.0, 1.0, 0.1), domain_error);
  CHECK_NOTHROW(CarlemanConfig(1.0, 5.0, 0.1));
}

TEST_CASE("tau = 0 gives the plain Laplacian") {
  std::mt19937_64 rng(1);
  const SparseValues v = random_sparse(2, 3, rng);
  const CarlemanConfig cfg(1.0, 0.0, 0.1);
  const Conjugates parts = tangential_conjugates(cfg, v);
  for (const auto& [j, x] : parts.antisymmetric) CHECK(x == 0.0);
  CHECK(relative_gap(parts.symmetric, conjugated_laplacian(cfg, v)) <= 1e-14);
}

TEST_CASE("split into symmetric and antisymmetric parts") {
  std::mt19937_64 rng(2);
  for (int d : {1, 2}) {
    const CarlemanConfig cfg(1.0, 3.0, 0.1);
    const SparseValues v = random_sparse(d, 4, rng);
    const SparseValues w = random_sparse(d, 4, rng);
    const Conjugates pv = tangential_conjugates(cfg, v);
    const Conjugates pw = tangential_conjugates(cfg, w);
    const double scale = std::abs(inner_product(pv.symmetric, w)) + std::abs(inner_product(pv.antisymmetric, w));
    CHECK(std::abs(inner_product(pv.symmetric, w) - inner_product(v, pw.symmetric)) <= 1e-12 * scale);
    CHECK(std::abs(inner_product(pv.antisymmetric, w) + inner_product(v, pw.antisymmetric)) <= 1e-12 * scale);

    SparseValues sum = pv.symmetric;
    for (const auto& [j, x] : pv.antisymmetric) sum[j] += x;
    CHECK(relative_gap(conjugated_laplacian(cfg, v), sum) <= 1e-12);
  }
}

TEST_CASE("commutator identity") {
  std::mt19937_64 rng(3);
  for (int d : {1, 2}) {
    for (double h : {0.2, 0.1, 0.05}) {
      for (double tau : {0.5, 2.0, 0.5 / h}) {
        const CarlemanConfig cfg(1.0, tau, h);
        const SparseValues v = random_sparse(d, 5, rng);
        const CommutatorCheck c = tangential_commutator_check(cfg, v);
        CHECK(c.defect <= 1e-10 * std::abs(c.lhs));
      }
    }
  }
}

TEST_CASE("commutator of a delta in closed form") {
  const double h = 0.1;
  const double tau = 3.0;
  const CarlemanConfig cfg(1.0, tau, h);
  SparseValues delta;
  delta[{1, 0}] = 1.0;
  const CommutatorCheck c = tangential_commutator_check(cfg, delta);
  const double h2 = h * h;
  const double front = std::sinh(2.0 * tau * h2);
  // potential: sinh^2(2 tau j_k h^2) summed over k at j = (1, 0)
  const double potential = std::pow(std::sinh(2.0 * tau * h2), 2);
  // gradient: the four neighbours each see a central difference of magnitude 1/(2h) along one axis
  const double gradient = 4.0 / (4.0 * h2);
  const double expected = -4.0 * front * potential / (h2 * h2) - 4.0 * front * gradient / h2;
  CHECK(c.rhs == doctest::Approx(expected).epsilon(1e-13));
  CHECK(c.defect <= 1e-10 * std::abs(c.lhs));
}

TEST_CASE("both sides vanish as tau goes to zero") {
  std::mt19937_64 rng(4);
  const SparseValues v = random_sparse(2, 3, rng);
  const CommutatorCheck small = tangential_commutator_check(CarlemanConfig(1.0, 1e-8, 0.1), v);
  const CommutatorCheck large = tangential_commutator_check(CarlemanConfig(1.0, 1.0, 0.1), v);
  CHECK(std::abs(small.lhs) <= 1e-6 * std::abs(large.lhs));
  CHECK(std::abs(small.rhs) <= 1e-6 * std::abs(large.rhs));
}

TEST_CASE("probe") {
  const CarlemanConfig cfg(1.0, 10.0, 0.05);
  const HalfSpaceField zero = [](std::span<const double>, double) { return 0.0; };
  CHECK(carleman_probe(cfg, 1, zero).empirical_constant == 0.0);

  const std::vector<double> center{0.1, 0.2};
  const HalfSpaceField bump = carleman_bump(center, 0.4);
  const CarlemanReport r = carleman_probe(cfg, 1, bump);
  CHECK(std::isfinite(r.empirical_constant));
  CHECK(r.empirical_constant > 0.0);

  double lo = 1e300;
  double hi = 0.0;
  for (double tau : {5.0, 10.0, 20.0}) {
    const double c = carleman_probe(CarlemanConfig(1.0, tau, 0.025), 1, bump).empirical_constant;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  CHECK(hi / lo <= 10.0);

  const std::vector<double> far{0.7, 0.3};
  CHECK_THROWS_AS(carleman_probe(cfg, 1, carleman_bump(far, 0.4)), precondition_error);
  CHECK_THROWS_AS(carleman_probe(CarlemanConfig(1.0, 0.5, 0.05), 1, bump), precondition_error);
}

}  // TEST_SUITE
