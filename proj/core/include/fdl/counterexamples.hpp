#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fdl/lattice.hpp"
#include "fdl/torus.hpp"

namespace fdl {

struct Certificate {
  explicit Certificate(const FracParams& p) : params(p) {}

  double residual_sup = 0.0;  // max |(-Delta)^s u| over the constrained set
  double u_norm = 0.0;        // sup norm of u
  std::optional<double> potential_bound;
  double tolerance = 0.0;
  FracParams params;
  std::vector<Site> constrained;
  std::vector<Site> support;
  std::string claim;
  bool accepted = false;
  bool multiple_solutions = false;
};

struct LatticeCounterexample {
  LatticeFunction u;
  Certificate certificate;
};

struct TorusCounterexample {
  TorusFunction u;
  Certificate certificate;
};

/// The `count` lattice points outside X closest to the centroid of X in the l-infinity sense,
/// ties broken lexicographically. Optional `box` restricts candidates to |j|_inf <= box.
std::vector<Site> nearest_complement(const std::vector<Site>& X, std::size_t count, int d,
                                     std::optional<long> box = std::nullopt);

/// M[x, y] = K(x - y) for x in X, y in Y.
Eigen::MatrixXd kernel_matrix(const FracParams& p, const std::vector<Site>& X,
                              const std::vector<Site>& Y);

struct NullVector {
  Eigen::VectorXd vector;  // sup norm 1, first nonzero entry positive
  Eigen::Index corank = 0;
};

/// Null vector of a wide matrix from its complete orthogonal decomposition.
NullVector null_vector(const Eigen::MatrixXd& M);

/// Nonzero u supported on Y with u = 0 and (-Delta_d)^s u = 0 on X (up to tol * |u|_inf).
LatticeCounterexample global_ucp_counterexample(const FracParams& p, const std::vector<Site>& X,
                                                std::optional<std::vector<Site>> Y, double tol);

struct SlabCounterexample {
  LatticeFunction u;
  LatticeFunction potential;  // V sampled on |j| <= window
  double coefficient;         // correction a placed at +-2
  Certificate certificate;
};

/// Coefficient a = (K(1) + K(2)) / (K(3) - K(1)).
double slab_coefficient(const FracParams& p);

/// The step function -1 | 0 0 0 | +1 with the correction +-a at +-2, lifted to dimension p.d()
/// along the first axis. With `corrected` false the correction is left out.
LatticeFunction slab_profile(const FracParams& p, bool corrected = true);

SlabCounterexample slab_counterexample_1d(const FracParams& p, long window = 50, double tol = 1e-10);

struct SlabSample {
  long j1 = 0;
  long j2 = 0;
  double value = 0.0;
  double prediction = 0.0;
};

struct Slab2dReport {
  std::vector<SlabSample> samples;
  double tail_bound = 0.0;  // certified truncation error per value
  double spread = 0.0;      // max over j1 of the spread of values across j2
  Certificate certificate;
};

/// Truncated double sums of (-Delta_d)^s u at (j1, j2), j1 in {-1, 0, 1}.
Slab2dReport slab_counterexample_2d(const FracParams& p, std::span<const long> j2_samples,
                                    long trunc_radius, double tol, bool corrected = true);

/// Torus analogue of the global construction (requires |X| <= N).
TorusCounterexample torus_ucp_counterexample(long N, int d, double s, const std::vector<Site>& X,
                                             double tol);

/// V_j = Lu_j / u_j where u_j != 0, else 0; throws inconsistency_error if u_j = 0 but |Lu_j| > tol.
std::vector<double> potential_from_pair(std::span<const double> u, std::span<const double> Lu,
                                        double tol);

}  // namespace fdl
