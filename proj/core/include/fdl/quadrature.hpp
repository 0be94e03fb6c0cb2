#pragma once

#include <functional>

namespace fdl {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  unsigned max_depth = 25;
};

/// Adaptive Gauss-Kronrod (7/15) on a finite interval.
/// Throws tolerance_failure when the error estimate misses max(rel_tol*|value|, abs_tol).
QuadratureResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                              const QuadratureOptions& opts = {});

/// Double-exponential rule on a finite interval; tolerates integrable endpoint singularities.
QuadratureResult integrate_endpoint_singular(const std::function<double(double)>& f, double a,
                                             double b, const QuadratureOptions& opts = {});

}  // namespace fdl
