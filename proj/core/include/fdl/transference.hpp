#pragma once

#include "fdl/lattice.hpp"
#include "fdl/torus.hpp"

namespace fdl {

struct TransferenceResult {
  double lattice_side = 0.0;  // sum_l (Rv)_l ((-Delta_d)^s phi)_l
  double torus_side = 0.0;    // sum_j v_j ((-Delta_A)^s p phi)_j
  double defect = 0.0;
  double window_error = 0.0;  // estimated truncation error of the lattice side
  double scale = 1.0;
  bool passed = false;
};

/// Lattice operator sized for transference checks on the torus of size N with test functions
/// supported in the l-infinity ball of radius `support_radius`.
LatticeOperator transference_operator(double s, long N, int d, long support_radius);

/// Compares both sides of the transference identity. The lattice side splits off the mean of v
/// (whose pairing with (-Delta_d)^s phi vanishes exactly) and sums the rest under a smooth
/// radial window; two window sizes give the error estimate.
TransferenceResult transference_check(const TorusFunction& v, const LatticeFunction& phi,
                                      const LatticeOperator& op, double tol);
TransferenceResult transference_check(const TorusFunction& v, const LatticeFunction& phi,
                                      double tol);

}  // namespace fdl
