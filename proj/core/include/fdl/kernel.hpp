#pragma once

#include <vector>

#include "fdl/params.hpp"

namespace fdl {

struct KernelValue {
  double value = 0.0;
  double abs_err = 0.0;
};

/// 4^s Gamma(1/2+s) / (sqrt(pi) |Gamma(-s)| h^{2s}), the constant in front of the 1D closed form.
double kernel_constant_1d(const FracParams& p);

/// Closed-form 1D kernel; zero at the origin.
double kernel_1d(const FracParams& p, long m);

/// Kernel in any dimension from the semigroup integral, to relative accuracy `tol`.
KernelValue kernel_nd(const FracParams& p, SiteView m, double tol = 1e-10);

/// Sum of kernel_1d over m >= M, in closed form.
double kernel_tail_sum_1d(const FracParams& p, long M);

/// Sum of the kernel over all nonzero offsets.
double kernel_total_mass(const FracParams& p, double tol = 1e-12);

/// Upper bound on the kernel depending only on the l1 norm of the offset.
double kernel_upper_bound(const FracParams& p, long l1);

/// Certified bound on the sum of the kernel over offsets with l1 norm > radius.
double kernel_l1_tail_bound(const FracParams& p, long radius);

/// Semidiscrete heat kernel prod_i e^{-2t} I_{m_i}(2t) on Z^d (unit mesh).
double heat_kernel(SiteView m, double t);

/// Heat kernel of the discrete torus {-N..N}^d with mesh h, from the periodized Bessel sum.
double torus_heat_kernel(long N, double h, SiteView j, double t, double tol = 1e-16);

/// Same quantity from its Fourier series.
double torus_heat_kernel_spectral(long N, double h, SiteView j, double t);

/// Mesh of the torus {-N..N}^d.
double torus_mesh(long N);

/// Periodized kernel sum_k K(j + k(2N+1)); requires p.h() == torus_mesh(N) and j != 0.
/// d = 1 uses the Gamma-ratio series, d >= 2 the periodized heat-kernel integral.
double torus_kernel(const FracParams& p, long N, SiteView j, double tol = 1e-12);

/// Gamma-ratio series for the 1D periodized kernel: the 2*terms leading terms summed explicitly
/// and the remainder evaluated from its Beta-integral representation.
double torus_kernel_1d_series(const FracParams& p, long N, long j, long terms, double tol = 1e-10);

/// Explicit partial sum over the 2*terms nearest periodic images (no remainder).
double torus_kernel_1d_partial(const FracParams& p, long N, long j, long terms);

/// Periodized kernel from the heat-kernel integral, any dimension.
double torus_kernel_heat_integral(const FracParams& p, long N, SiteView j, double tol = 1e-12);

/// Cached kernel values on {m : |m|_inf <= radius}, symmetric under sign flips and permutations.
class KernelTable {
 public:
  KernelTable(const FracParams& p, long radius);

  [[nodiscard]] const FracParams& params() const noexcept { return params_; }
  [[nodiscard]] long radius() const noexcept { return radius_; }
  /// Coefficient c of the c |m|^{-d-2s} far-field model (upper-bound constant for d >= 2).
  [[nodiscard]] double tail_constant() const noexcept { return tail_constant_; }

  /// Kernel value at offset m; throws precondition_error outside the cached radius.
  [[nodiscard]] double operator()(SiteView m) const;
  [[nodiscard]] double at1(long m) const;
  [[nodiscard]] double at2(long m1, long m2) const;

 private:
  [[nodiscard]] std::size_t flat_index(SiteView m) const;

  FracParams params_;
  long radius_;
  double tail_constant_ = 0.0;
  std::vector<double> values_;  // nonnegative orthant, row-major
};

}  // namespace fdl
