#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fdl/params.hpp"

namespace fdl {

/// Recover f supported in W from the half-Laplacian of f observed on Omega, on the torus of
/// size N. The order is fixed at 1/2.
struct InverseSetup {
  long N = 16;
  int d = 2;
  std::vector<Site> W;
  std::vector<Site> Omega;
  double reg_lambda = 1e-6;
  double noise_level = 0.0;
  std::uint64_t seed = 0;

  /// Throws precondition_error unless W and Omega are nonempty, disjoint and on the torus.
  void validate() const;
};

/// W a 2 x 3 block and Omega the 3 x 3 block around the origin on the N = 16 torus (d = 2),
/// with `separation` lattice steps between them along the first axis.
InverseSetup standard_inverse_setup(long separation = 3, std::uint64_t seed = 0);

/// A[omega, w] = ((-Delta)^{1/2} delta_w)(omega) = -K(omega - w). Five seeded columns are checked
/// against the spectral operator; a mismatch above 1e-10 throws tolerance_failure.
Eigen::MatrixXd forward_matrix(const InverseSetup& setup);

/// Gram matrix of the discrete H^1 inner product restricted to functions supported on W,
/// recovered from sobolev_norm_periodic by polarization.
Eigen::MatrixXd h1_gram(const InverseSetup& setup);

/// argmin |A f - g|^2 + lambda <f, P f>, as a stacked least-squares problem.
Eigen::VectorXd recover_tikhonov(const Eigen::MatrixXd& A, const Eigen::VectorXd& g, double lambda,
                                 const Eigen::MatrixXd& P);

struct StabilityPoint {
  double eps = 0.0;
  double error_mean = 0.0;
  double error_std = 0.0;
  double data_ratio = 0.0;  // mean noise norm relative to |f*|_{H^1} = 1
  double lambda_chosen = 0.0;  // geometric mean over trials
};

struct StabilityCurve {
  std::vector<StabilityPoint> points;
  double fitted_nu = 0.0;
  double fitted_C = 0.0;
  double r_squared = 0.0;
};

struct TrialResult {
  double error = 0.0;
  double data_ratio = 0.0;
  double lambda = 0.0;
};

/// One recovery with noise level eps (eps = 0 is allowed) and trial generator seed ^ trial.
/// lambda follows the discrepancy principle |A f - g| = eps |g| by bisection on log lambda over
/// [-60, 10]; eps = 0 takes the lower end. Throws domain_error if the bracket fails.
TrialResult recovery_trial(const Eigen::MatrixXd& A, const Eigen::MatrixXd& P, double eps,
                           std::uint64_t seed, std::uint64_t trial);

/// eps_list strictly decreasing in (0,1). Fits log(error) = log C - nu log|log(data ratio)|.
StabilityCurve stability_sweep(const InverseSetup& setup, std::span<const double> eps_list,
                               int trials);

/// C f_h1 |log eps|^{-nu} + C exp(-(C h)^{-1} |log eps|^{-1+nu}) f_h1.
double stability_bound(double eps, double h, double nu, double C, double f_h1);

/// h0 <= 0.1 |log eps|^{-1+nu} |log(-C log eps)|^{-1}.
bool continuum_regime(double h0, double eps, double nu, double C);

}  // namespace fdl
