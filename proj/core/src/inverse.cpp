#include "fdl/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fdl/errors.hpp"
#include "fdl/torus.hpp"

namespace fdl {

namespace {

constexpr double kLogLambdaLow = -60.0;
constexpr double kLogLambdaHigh = 10.0;
constexpr int kBisectionSteps = 60;

Eigen::VectorXd standard_normals(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

}  // namespace

void InverseSetup::validate() const {
  if (N < 1 || d < 1) throw precondition_error("InverseSetup: N and d must be positive");
  if (W.empty() || Omega.empty()) throw precondition_error("InverseSetup: W and Omega must be nonempty");
  auto on_torus = [&](const Site& j) {
    return static_cast<int>(j.size()) == d && linf_norm(j) <= N;
  };
  const std::set<Site> w_set(W.begin(), W.end());
  if (w_set.size() != W.size()) throw precondition_error("InverseSetup: W has repeated points");
  for (const Site& j : W) {
    if (!on_torus(j)) throw precondition_error("InverseSetup: W point outside the torus");
  }
  for (const Site& j : Omega) {
    if (!on_torus(j)) throw precondition_error("InverseSetup: Omega point outside the torus");
    if (w_set.count(j) != 0) throw precondition_error("InverseSetup: W and Omega must be disjoint");
  }
  if (!(reg_lambda > 0.0)) throw domain_error("InverseSetup: reg_lambda must be positive");
  if (!(noise_level >= 0.0)) throw domain_error("InverseSetup: noise_level must be nonnegative");
}

InverseSetup standard_inverse_setup(long separation, std::uint64_t seed) {
  if (separation < 1) throw precondition_error("standard_inverse_setup: separation must be positive");
  InverseSetup setup;
  setup.N = 16;
  setup.d = 2;
  setup.seed = seed;
  for (long i = -2 - separation; i <= -1 - separation; ++i) {
    for (long j = -1; j <= 1; ++j) setup.W.push_back({i, j});
  }
  for (long i = -1; i <= 1; ++i) {
    for (long j = -1; j <= 1; ++j) setup.Omega.push_back({i, j});
  }
  setup.validate();
  return setup;
}

Eigen::MatrixXd forward_matrix(const InverseSetup& setup) {
  setup.validate();
  const TorusKernel kernel(setup.N, setup.d, 0.5);
  const auto rows = static_cast<Eigen::Index>(setup.Omega.size());
  const auto cols = static_cast<Eigen::Index>(setup.W.size());
  Eigen::MatrixXd A(rows, cols);
  Site diff(static_cast<std::size_t>(setup.d));
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Site& o = setup.Omega[static_cast<std::size_t>(r)];
      const Site& w = setup.W[static_cast<std::size_t>(c)];
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = o[k] - w[k];
      A(r, c) = -kernel(diff);
    }
  }

  std::mt19937_64 rng(setup.seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, cols - 1);
  double worst = 0.0;
  for (int sample = 0; sample < 5; ++sample) {
    const Eigen::Index c = pick(rng);
    TorusFunction delta(setup.N, setup.d);
    delta(setup.W[static_cast<std::size_t>(c)]) = 1.0;
    const TorusFunction image = apply_frac_torus_spectral(delta, 0.5);
    for (Eigen::Index r = 0; r < rows; ++r) {
      worst = std::max(worst, std::abs(image(setup.Omega[static_cast<std::size_t>(r)]) - A(r, c)));
    }
  }
  if (worst > 1e-10) throw tolerance_failure("forward_matrix: spectral consistency check", worst, 1e-10);
  return A;
}

Eigen::MatrixXd h1_gram(const InverseSetup& setup) {
  setup.validate();
  const auto n = static_cast<Eigen::Index>(setup.W.size());
  TorusFunction probe(setup.N, setup.d);
  const double h = probe.h();
  auto norm2 = [&](const Site& a, const Site& b, double sign) {
    std::fill(probe.values().begin(), probe.values().end(), 0.0);
    probe(a) += 1.0;
    probe(b) += sign;
    const double v = sobolev_norm_periodic(probe.values(), setup.N, setup.d, h, 1.0);
    return v * v;
  };
  Eigen::MatrixXd P(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a; b < n; ++b) {
      const Site& wa = setup.W[static_cast<std::size_t>(a)];
      const Site& wb = setup.W[static_cast<std::size_t>(b)];
      P(a, b) = 0.25 * (norm2(wa, wb, 1.0) - norm2(wa, wb, -1.0));
      P(b, a) = P(a, b);
    }
  }
  return P;
}

Eigen::VectorXd recover_tikhonov(const Eigen::MatrixXd& A, const Eigen::VectorXd& g, double lambda,
                                 const Eigen::MatrixXd& P) {
  if (!(lambda > 0.0)) throw domain_error("recover_tikhonov: lambda must be positive");
  if (g.size() != A.rows() || P.rows() != A.cols() || P.cols() != A.cols()) {
    throw precondition_error("recover_tikhonov: dimension mismatch");
  }
  const Eigen::LLT<Eigen::MatrixXd> chol(P);
  if (chol.info() != Eigen::Success) throw std::logic_error("recover_tikhonov: penalty is not positive definite");
  const Eigen::MatrixXd U = chol.matrixU();
  Eigen::MatrixXd stacked(A.rows() + A.cols(), A.cols());
  stacked << A, std::sqrt(lambda) * U;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(stacked.rows());
  rhs.head(g.size()) = g;
  return stacked.colPivHouseholderQr().solve(rhs);
}

TrialResult recovery_trial(const Eigen::MatrixXd& A, const Eigen::MatrixXd& P, double eps,
                           std::uint64_t seed, std::uint64_t trial) {
  if (!(eps >= 0.0 && eps < 1.0)) throw domain_error("recovery_trial: eps must lie in [0,1)");
  std::mt19937_64 rng(seed ^ trial);
  Eigen::VectorXd truth = standard_normals(rng, A.cols());
  truth /= std::sqrt(truth.dot(P * truth));
  const Eigen::VectorXd clean = A * truth;
  Eigen::VectorXd noise = standard_normals(rng, A.rows());
  noise *= clean.norm() / noise.norm();
  const Eigen::VectorXd g = clean + eps * noise;

  const double target = eps * g.norm();
  auto residual = [&](double log_lambda) {
    return (A * recover_tikhonov(A, g, std::exp(log_lambda), P) - g).norm();
  };
  double lo = kLogLambdaLow;
  double hi = kLogLambdaHigh;
  if (eps > 0.0) {
    if (residual(lo) > target || residual(hi) < target) {
      throw domain_error("recovery_trial: discrepancy target not bracketed by the lambda range");
    }
    for (int step = 0; step < kBisectionSteps; ++step) {
      const double mid = 0.5 * (lo + hi);
      (residual(mid) > target ? hi : lo) = mid;
    }
  }
  const Eigen::VectorXd estimate = recover_tikhonov(A, g, std::exp(lo), P);
  return {(estimate - truth).norm(), eps * clean.norm(), std::exp(lo)};
}

StabilityCurve stability_sweep(const InverseSetup& setup, std::span<const double> eps_list, int trials) {
  if (trials < 1) throw precondition_error("stability_sweep: trials must be positive");
  if (eps_list.size() < 2) throw precondition_error("stability_sweep: need at least two noise levels");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0 && eps_list[i] < 1.0)) throw domain_error("stability_sweep: eps must lie in (0,1)");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
      throw precondition_error("stability_sweep: eps_list must decrease strictly");
    }
  }
  const Eigen::MatrixXd A = forward_matrix(setup);
  const Eigen::MatrixXd P = h1_gram(setup);

  StabilityCurve curve;
  for (double eps : eps_list) {
    std::vector<TrialResult> results;
    results.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) results.push_back(recovery_trial(A, P, eps, setup.seed, static_cast<std::uint64_t>(t)));
    StabilityPoint point;
    point.eps = eps;
    double log_lambda = 0.0;
    for (const TrialResult& r : results) {
      point.error_mean += r.error;
      point.data_ratio += r.data_ratio;
      log_lambda += std::log(r.lambda);
    }
    const double count = static_cast<double>(trials);
    point.error_mean /= count;
    point.data_ratio /= count;
    point.lambda_chosen = std::exp(log_lambda / count);
    double var = 0.0;
    for (const TrialResult& r : results) var += (r.error - point.error_mean) * (r.error - point.error_mean);
    point.error_std = trials > 1 ? std::sqrt(var / (count - 1.0)) : 0.0;
    curve.points.push_back(point);
  }

  const auto n = static_cast<Eigen::Index>(curve.points.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const StabilityPoint& p = curve.points[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = std::log(std::abs(std::log(p.data_ratio)));
    y(i) = std::log(p.error_mean);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(y);
  curve.fitted_C = std::exp(coef(0));
  curve.fitted_nu = -coef(1);
  const double mean = y.mean();
  const double total = (y.array() - mean).square().sum();
  const double unexplained = (design * coef - y).squaredNorm();
  curve.r_squared = total > 0.0 ? 1.0 - unexplained / total : 1.0;
  return curve;
}

double stability_bound(double eps, double h, double nu, double C, double f_h1) {
  if (!(eps > 0.0 && eps < 1.0)) throw domain_error("stability_bound: eps must lie in (0,1)");
  if (!(h > 0.0)) throw domain_error("stability_bound: h must be positive");
  const double L = std::abs(std::log(eps));
  return C * f_h1 * std::pow(L, -nu) + C * std::exp(-std::pow(L, -1.0 + nu) / (C * h)) * f_h1;
}

bool continuum_regime(double h0, double eps, double nu, double C) {
  if (!(eps > 0.0 && eps < 1.0)) throw domain_error("continuum_regime: eps must lie in (0,1)");
  const double inner = -C * std::log(eps);
  if (!(inner > 1.0)) throw domain_error("continuum_regime: -C log eps must exceed 1");
  const double L = std::abs(std::log(eps));
  return h0 <= 0.1 * std::pow(L, -1.0 + nu) / std::log(inner);
}

}  // namespace fdl
