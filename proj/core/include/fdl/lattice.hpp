#pragma once

#include <map>
#include <utility>
#include <variant>

#include "fdl/kernel.hpp"
#include "fdl/params.hpp"
#include "fdl/torus.hpp"

namespace fdl {

using SparseValues = std::map<Site, double>;

struct FinitelySupported {
  SparseValues support;
};

/// left for j_axis <= -cutoff, right for j_axis >= cutoff, zero in between. On top come a
/// correction depending on j_axis alone and a finite perturbation.
struct StepProfile {
  int axis = 0;  // zero-based
  long cutoff = 1;
  double left = 0.0;
  double right = 0.0;
  std::map<long, double> axial;
  SparseValues perturbation;
};

/// A bounded function on Z^d (mesh h) with finite support or a one-axis step far field.
class LatticeFunction {
 public:
  using Shape = std::variant<FinitelySupported, StepProfile>;

  LatticeFunction(const FracParams& params, Shape shape);

  static LatticeFunction delta(const FracParams& params, SiteView at, double value = 1.0);

  [[nodiscard]] const FracParams& params() const noexcept { return params_; }
  [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
  [[nodiscard]] bool finitely_supported() const noexcept {
    return std::holds_alternative<FinitelySupported>(shape_);
  }

  [[nodiscard]] double operator()(SiteView j) const;
  /// Largest |u_j| over the lattice.
  [[nodiscard]] double sup_norm() const;
  /// Value of the far-field part alone (zero for finitely supported functions).
  [[nodiscard]] double background(SiteView j) const;
  /// Finite part: the support, or the perturbation of a step profile.
  [[nodiscard]] const SparseValues& sparse_part() const;

  [[nodiscard]] LatticeFunction scaled(double factor) const;

 private:
  FracParams params_;
  Shape shape_;
};

struct ApplyResult {
  double value = 0.0;
  double error_bound = 0.0;
};

/// (-Delta_d)^s on the lattice, reading kernel values through a cached table.
class LatticeOperator {
 public:
  /// `table_radius` fixes the l-infinity box of cached kernel values (and the truncation box
  /// for step profiles in d >= 2).
  LatticeOperator(const FracParams& params, long table_radius);

  [[nodiscard]] const FracParams& params() const noexcept { return params_; }
  [[nodiscard]] long table_radius() const noexcept { return table_.radius(); }
  [[nodiscard]] const KernelTable& table() const noexcept { return table_; }

  [[nodiscard]] double kernel(SiteView m) const;
  /// sum over m != 0 of the kernel.
  [[nodiscard]] double total_mass() const noexcept { return total_mass_; }
  /// Certified bound on the kernel mass outside the l1 ball of radius table_radius.
  [[nodiscard]] double truncation_tail() const noexcept { return truncation_tail_; }

  /// sum_{m != j} (u_j - u_m) K(j - m). Finitely supported inputs and d = 1 step profiles are
  /// summed exactly; d >= 2 step profiles are truncated to the l1 ball of radius table_radius.
  [[nodiscard]] ApplyResult apply(const LatticeFunction& u, SiteView j) const;

 private:
  [[nodiscard]] double halfline_sum_1d(long from) const;
  [[nodiscard]] ApplyResult apply_step_1d(const LatticeFunction& u, const StepProfile& step,
                                          SiteView j) const;
  [[nodiscard]] ApplyResult apply_step_truncated(const LatticeFunction& u, SiteView j) const;

  FracParams params_;
  KernelTable table_;
  double total_mass_;
  double truncation_tail_;
};

/// One-off application; throws tolerance_failure when the error bound exceeds tol.
ApplyResult apply_frac_lattice(const LatticeFunction& u, SiteView j, double tol);

/// (p u)_j = sum_l u(l(2N+1) + j).
TorusFunction periodize(const LatticeFunction& u, long N);

/// (2N+1)-periodic extension of a torus function to Z^d.
class PeriodicExtension {
 public:
  explicit PeriodicExtension(TorusFunction v) : v_(std::move(v)) {}
  [[nodiscard]] double operator()(SiteView m) const { return v_(m); }
  [[nodiscard]] const TorusFunction& base() const noexcept { return v_; }

 private:
  TorusFunction v_;
};

PeriodicExtension repeat(const TorusFunction& v);

/// Lattice Sobolev norm of a finitely supported function via torus embedding.
double sobolev_norm(const LatticeFunction& u, double r);

}  // namespace fdl
