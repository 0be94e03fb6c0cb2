#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fdl/torus.hpp"

namespace fdl {

/// Values of an extension u(x, t) on torus points times a grid of heights.
class ExtensionField {
 public:
  /// `values` holds one torus-sized level per entry of `t_grid`, level-major. `slope` is the
  /// weighted normal derivative lim t^{1-2s} d/dt u(., t) at t = 0.
  ExtensionField(TorusFunction base, double s, std::vector<double> t_grid,
                 std::vector<double> values, TorusFunction slope);

  [[nodiscard]] const TorusFunction& base() const noexcept { return base_; }
  [[nodiscard]] double s() const noexcept { return s_; }
  [[nodiscard]] std::span<const double> t_grid() const noexcept { return t_grid_; }
  [[nodiscard]] std::size_t levels() const noexcept { return t_grid_.size(); }
  [[nodiscard]] std::span<const double> level(std::size_t i) const;
  [[nodiscard]] double operator()(std::size_t level, std::size_t flat) const {
    return values_[level * base_.size() + flat];
  }
  [[nodiscard]] const TorusFunction& weighted_slope() const noexcept { return slope_; }

 private:
  TorusFunction base_;
  double s_;
  std::vector<double> t_grid_;
  std::vector<double> values_;
  TorusFunction slope_;
};

/// t_min * ratio^k for k = 0.. while below t_max, with t_max appended.
std::vector<double> geometric_grid(double t_min, double t_max, double ratio = 1.05);

/// Gamma(1-s) / (4^{s-1/2} Gamma(s)): the weighted Neumann trace equals this times (-Delta)^s u.
double dtn_constant(double s);

/// Solves the degenerate extension problem mode by mode: the coefficient at frequency k is
/// multiplied by extension_profile(s, sqrt(lambda_k) t).
ExtensionField cs_extend_torus(const TorusFunction& v, double s, std::span<const double> t_grid);

/// -lim t^{1-2s} d/dt u from a fit u(t) = u(0) + beta t^{2s} + gamma t^2 over the lowest
/// `fit_points` levels. The result is compared against dtn_constant(s) (-Delta)^s u and a
/// tolerance_failure is thrown when they differ by more than `check_tol` (relative).
TorusFunction neumann_trace(const ExtensionField& field, std::size_t fit_points,
                            double check_tol = 1e-4);

struct HalfBallNorms {
  double bulk_l2 = 0.0;
  double trace_l2 = 0.0;
  double trace_h1 = 0.0;
  double trace_dt_l2 = 0.0;
};

/// Norms over the half ball of radius r around (center, 0): the bulk L2 norm integrates the
/// levels by the trapezoid rule up to the local height sqrt(r^2 - |x - center|^2); the trace
/// norms read the level t = 0 (or the lowest level) and the stored normal derivative.
HalfBallNorms half_ball_norms(const ExtensionField& field, std::span<const double> center, double r);

enum class BulkMode {
  reflected,  // u(x, t) = U(x, T - t) with U the decaying extension of f
  decaying,   // the decaying extension of f itself
};

struct BoundaryBulkOptions {
  double r0 = 0.75;
  double horizon = 1.1;  // T for the reflected mode
  std::size_t t_steps = 400;
  double constant = 10.0;
  BulkMode mode = BulkMode::reflected;
  std::optional<double> alpha;  // exponent used for `holds`; defaults to the fitted one
};

struct BoundaryBulkReport {
  double h = 0.0;
  double r0 = 0.0;
  double bulk_small = 0.0;  // |u|_{L2(B+_{r0})}
  double bulk_big = 0.0;    // |u|_{L2(B+_1)}
  double trace_data = 0.0;  // |u|_{H1(B'_1)} + |d_t u|_{L2(B'_1)}
  double raw_alpha = 0.0;     // log(bulk_small / M) / log(trace_data / M)
  double fitted_alpha = 0.0;  // raw_alpha clipped to the open unit interval
  bool degenerate = false;  // bulk_big <= trace_data: no exponent is identifiable
  bool holds = false;
};

/// Three-balls probe for s = 1/2 on uniform heights in [0, 1].
BoundaryBulkReport boundary_bulk_probe(const TorusFunction& f, const BoundaryBulkOptions& options = {});

/// Checks bulk_small <= C M^{1-alpha} D^alpha + C e^{-C/h} bulk_big with M = max(bulk_big, D).
bool boundary_bulk_holds(const BoundaryBulkReport& report, double alpha, double constant);

/// Random data supported in |x| < 1/2 on the one-dimensional torus of size N: the discrete
/// bilaplacian of two smooth bumps.
TorusFunction boundary_bulk_sample(long N, std::uint64_t seed);

}  // namespace fdl
