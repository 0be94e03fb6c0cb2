#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "fdl/carleman.hpp"
#include "fdl/harness/experiments.hpp"
#include "fdl/kernel.hpp"
#include "fdl/specfun.hpp"
#include "fdl/torus.hpp"
#include "fdl/transference.hpp"

namespace fdl::harness {

namespace {

void special_functions(ExperimentReport& report) {
  double gamma_defect = 0.0;
  for (double x : {0.3, 1.7, 4.2, 11.5, 40.25}) {
    gamma_defect = std::max(gamma_defect, std::abs(log_gamma(x + 1.0) - log_gamma(x) - std::log(x)));
  }
  report.expect_at_most("log-gamma recurrence", gamma_defect, 1e-12);

  double bessel_i_defect = 0.0;
  for (double t : {0.5, 3.0, 25.0}) {
    const auto seq = bessel_i_scaled_sequence(12, t);
    for (std::size_t k = 1; k + 1 < seq.size(); ++k) {
      const double lhs = seq[k - 1] - seq[k + 1];
      const double rhs = 2.0 * static_cast<double>(k) / t * seq[k];
      bessel_i_defect = std::max(bessel_i_defect, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
    }
  }
  report.expect_at_most("modified Bessel I three-term recurrence (relative)", bessel_i_defect, 1e-12);

  double bessel_k_defect = 0.0;
  for (double x : {0.05, 1.0, 7.5, 60.0}) {
    const double exact = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
    bessel_k_defect = std::max(bessel_k_defect, std::abs(bessel_k(0.5, x) - exact) / exact);
  }
  report.expect_at_most("K_{1/2} closed form (relative)", bessel_k_defect, 1e-10);
}

void kernel_closed_form(ExperimentReport& report, double scale) {
  double worst = 0.0;
  const std::pair<double, long> points[] = {{0.25, 1}, {0.5, 2}, {0.5, 7}, {0.75, 3}, {0.75, 12}};
  for (const auto& [s, m] : points) {
    const FracParams p(s, 1.0, 1);
    const Site site{m};
    const double closed = scale * kernel_1d(p, m);
    worst = std::max(worst, std::abs(closed - kernel_nd(p, site).value) / std::abs(closed));
  }
  report.expect_at_most("kernel closed form vs quadrature (relative)", worst, 1e-8);
}

void torus_oracles(ExperimentReport& report, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int d = 1; d <= 2; ++d) {
    const TorusKernel kernel(6, d, 0.5);
    for (int trial = 0; trial < 3; ++trial) {
      TorusFunction v(6, d);
      for (double& x : v.values()) x = normal(rng);
      const TorusFunction a = apply_frac_torus_pointwise(v, kernel);
      const TorusFunction b = apply_frac_torus_spectral(v, 0.5);
      for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
    }
  }
  report.expect_at_most("pointwise vs spectral at N = 6", worst, 1e-10);
}

void commutator(ExperimentReport& report, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const CarlemanConfig cfg(1.0, 3.0, 0.1);
  SparseValues v;
  for (long a = -4; a <= 4; ++a) {
    for (long b = -4; b <= 4; ++b) v[{a, b}] = normal(rng);
  }
  const CommutatorCheck check = tangential_commutator_check(cfg, v);
  report.expect_at_most("commutator identity at h = 0.1, tau = 3 (relative)", check.defect / std::abs(check.lhs),
                        1e-10);
}

void transference(ExperimentReport& report, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<long> coord(-2, 2);
  const LatticeOperator op = transference_operator(0.5, 4, 1, 2);
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    TorusFunction v(4, 1);
    for (double& x : v.values()) x = normal(rng);
    FinitelySupported phi;
    for (int q = 0; q < 4; ++q) phi.support[{coord(rng)}] += normal(rng);
    const TransferenceResult r = transference_check(v, LatticeFunction(op.params(), std::move(phi)), op, 1e-8);
    worst = std::max(worst, r.defect / r.scale);
  }
  report.expect_at_most("transference identity at N = 4 (relative)", worst, 1e-8);
}

}  // namespace

ExperimentReport self_test(const SelfTestOptions& options) {
  ExperimentReport report;
  report.config.experiment = "self-test";
  report.config.seed = options.seed;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(options.seed);
  try {
    special_functions(report);
    kernel_closed_form(report, options.kernel_constant_scale);
    torus_oracles(report, rng);
    commutator(report, rng);
    transference(report, rng);
  } catch (const std::exception& e) {
    report.error = std::string("self-test: ") + e.what();
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace fdl::harness
