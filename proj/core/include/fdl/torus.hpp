#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fdl/params.hpp"

namespace fdl {

/// Real values on the discrete torus {-N..N}^d with mesh 2 pi/(2N+1), stored row-major with
/// coordinate -N first along every axis.
class TorusFunction {
 public:
  TorusFunction(long N, int d);
  TorusFunction(long N, int d, std::vector<double> values);

  [[nodiscard]] long N() const noexcept { return N_; }
  [[nodiscard]] int d() const noexcept { return d_; }
  [[nodiscard]] long side() const noexcept { return 2 * N_ + 1; }
  [[nodiscard]] double h() const noexcept;
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<double> values() noexcept { return values_; }

  /// Flat index of the torus point congruent to j (any integer coordinates).
  [[nodiscard]] std::size_t index(SiteView j) const;
  /// Centered coordinates of a flat index.
  [[nodiscard]] Site site(std::size_t flat) const;

  [[nodiscard]] double operator()(SiteView j) const { return values_[index(j)]; }
  [[nodiscard]] double& operator()(SiteView j) { return values_[index(j)]; }

 private:
  long N_;
  int d_;
  std::vector<double> values_;
};

/// Fourier coefficients on the same centered layout as TorusFunction.
struct TorusSpectrum {
  long N = 0;
  int d = 0;
  std::vector<std::complex<double>> coeffs;
};

/// c_m = (2N+1)^{-d} sum_j v_j exp(-2 pi i m.j/(2N+1)).
TorusSpectrum dft(const TorusFunction& v);
/// Inverse of dft; the imaginary part is dropped.
TorusFunction idft(const TorusSpectrum& c);
/// Inverse of dft keeping complex values.
std::vector<std::complex<double>> idft_complex(const TorusSpectrum& c);

/// h^{-2s} (sum_k 4 sin^2(h xi_k/2))^s.
double symbol(const FracParams& p, std::span<const double> xi);

/// Multiplier of (-Delta)^s on the torus at integer frequency k.
double torus_symbol(long N, SiteView k, double s);

TorusFunction apply_frac_torus_spectral(const TorusFunction& v, double s);

/// Periodized kernel tabulated on the whole torus (zero at the origin).
class TorusKernel {
 public:
  TorusKernel(long N, int d, double s, double tol = 1e-12);

  [[nodiscard]] long N() const noexcept { return N_; }
  [[nodiscard]] int d() const noexcept { return d_; }
  [[nodiscard]] double s() const noexcept { return s_; }
  [[nodiscard]] double operator()(SiteView j) const;
  [[nodiscard]] std::span<const double> values() const noexcept { return table_.values(); }

 private:
  long N_;
  int d_;
  double s_;
  TorusFunction table_;
};

TorusFunction apply_frac_torus_pointwise(const TorusFunction& v, const TorusKernel& kernel);
TorusFunction apply_frac_torus_pointwise(const TorusFunction& v, double s, double tol = 1e-12);

/// (sum_j |F_r v_j|^2)^{1/2} with F_r the multiplier (1 + h^{-2} sum_k sin^2(h xi_k))^{r/2}.
double sobolev_norm(const TorusFunction& v, double r);

/// Same norm for values laid out like a torus of side n but carrying lattice mesh h.
double sobolev_norm_periodic(std::span<const double> values, long N, int d, double h, double r);

}  // namespace fdl
