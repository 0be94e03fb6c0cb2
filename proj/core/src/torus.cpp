#include "fdl/torus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include <unsupported/Eigen/FFT>

#include "fdl/errors.hpp"
#include "fdl/kernel.hpp"

namespace fdl {

namespace {

using cplx = std::complex<double>;

constexpr long kDirectLimit = 64;

std::size_t checked_size(long N, int d) {
  if (N < 1) throw precondition_error("torus: N must be positive");
  if (d < 1) throw precondition_error("torus: d must be positive");
  std::size_t size = 1;
  for (int k = 0; k < d; ++k) size *= static_cast<std::size_t>(2 * N + 1);
  return size;
}

long wrap(long j, long N) {
  const long n = 2 * N + 1;
  long r = (j + N) % n;
  if (r < 0) r += n;
  return r;
}

// In-place transform of every line along `axis`; sign -1 is forward.
void transform_axis(std::vector<cplx>& data, long N, int d, int axis, int sign) {
  const long n = 2 * N + 1;
  std::size_t stride = 1;
  for (int k = d - 1; k > axis; --k) stride *= static_cast<std::size_t>(n);
  const std::size_t block = stride * static_cast<std::size_t>(n);
  const std::size_t lines = data.size() / static_cast<std::size_t>(n);
  std::vector<cplx> line(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  std::vector<cplx> twiddle(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle[static_cast<std::size_t>(k)] = std::polar(1.0, sign * angle);
  }
  Eigen::FFT<double> fft;
  for (std::size_t l = 0; l < lines; ++l) {
    const std::size_t base = (l / stride) * block + (l % stride);
    if (n <= kDirectLimit) {
      for (long a = 0; a < n; ++a) line[static_cast<std::size_t>(a)] = data[base + static_cast<std::size_t>(a) * stride];
      for (long m = -N; m <= N; ++m) {
        cplx acc{0.0, 0.0};
        for (long j = -N; j <= N; ++j) {
          long phase = (m * j) % n;
          if (phase < 0) phase += n;
          acc += line[static_cast<std::size_t>(j + N)] * twiddle[static_cast<std::size_t>(phase)];
        }
        out[static_cast<std::size_t>(m + N)] = acc;
      }
    } else {
      // Natural order 0..n-1 for the fast transform.
      for (long j = -N; j <= N; ++j) {
        line[static_cast<std::size_t>((j + n) % n)] = data[base + static_cast<std::size_t>(j + N) * stride];
      }
      std::vector<cplx> spec;
      if (sign < 0) {
        fft.fwd(spec, line);
      } else {
        fft.SetFlag(Eigen::FFT<double>::Unscaled);
        fft.inv(spec, line);
      }
      for (long m = -N; m <= N; ++m) out[static_cast<std::size_t>(m + N)] = spec[static_cast<std::size_t>((m + n) % n)];
    }
    const double scale = sign < 0 ? 1.0 / static_cast<double>(n) : 1.0;
    for (long a = 0; a < n; ++a) {
      data[base + static_cast<std::size_t>(a) * stride] = out[static_cast<std::size_t>(a)] * scale;
    }
  }
}

}  // namespace

TorusFunction::TorusFunction(long N, int d) : N_(N), d_(d), values_(checked_size(N, d), 0.0) {}

TorusFunction::TorusFunction(long N, int d, std::vector<double> values)
    : N_(N), d_(d), values_(std::move(values)) {
  if (values_.size() != checked_size(N, d)) {
    throw precondition_error("TorusFunction: value count must be (2N+1)^d");
  }
}

double TorusFunction::h() const noexcept {
  return 2.0 * std::numbers::pi / static_cast<double>(2 * N_ + 1);
}

std::size_t TorusFunction::index(SiteView j) const {
  if (static_cast<int>(j.size()) != d_) throw precondition_error("TorusFunction: point dimension mismatch");
  std::size_t flat = 0;
  for (long c : j) flat = flat * static_cast<std::size_t>(side()) + static_cast<std::size_t>(wrap(c, N_));
  return flat;
}

Site TorusFunction::site(std::size_t flat) const {
  Site j(static_cast<std::size_t>(d_));
  for (std::size_t k = j.size(); k-- > 0;) {
    j[k] = static_cast<long>(flat % static_cast<std::size_t>(side())) - N_;
    flat /= static_cast<std::size_t>(side());
  }
  return j;
}

TorusSpectrum dft(const TorusFunction& v) {
  TorusSpectrum c{v.N(), v.d(), std::vector<cplx>(v.values().begin(), v.values().end())};
  for (int axis = 0; axis < v.d(); ++axis) transform_axis(c.coeffs, v.N(), v.d(), axis, -1);
  return c;
}

std::vector<cplx> idft_complex(const TorusSpectrum& c) {
  if (c.coeffs.size() != checked_size(c.N, c.d)) throw precondition_error("idft: coefficient count mismatch");
  std::vector<cplx> data = c.coeffs;
  for (int axis = 0; axis < c.d; ++axis) transform_axis(data, c.N, c.d, axis, +1);
  return data;
}

TorusFunction idft(const TorusSpectrum& c) {
  const std::vector<cplx> data = idft_complex(c);
  std::vector<double> re(data.size());
  std::transform(data.begin(), data.end(), re.begin(), [](const cplx& z) { return z.real(); });
  return {c.N, c.d, std::move(re)};
}

double symbol(const FracParams& p, std::span<const double> xi) {
  if (static_cast<int>(xi.size()) != p.d()) throw precondition_error("symbol: frequency dimension mismatch");
  double sum = 0.0;
  for (double x : xi) {
    const double sn = std::sin(0.5 * p.h() * x);
    sum += 4.0 * sn * sn;
  }
  return std::pow(p.h(), -2.0 * p.s()) * std::pow(sum, p.s());
}

double torus_symbol(long N, SiteView k, double s) {
  const double n = static_cast<double>(2 * N + 1);
  const double h = 2.0 * std::numbers::pi / n;
  double sum = 0.0;
  for (long c : k) {
    const double sn = std::sin(std::numbers::pi * static_cast<double>(c) / n);
    sum += 4.0 * sn * sn / (h * h);
  }
  return std::pow(sum, s);
}

TorusFunction apply_frac_torus_spectral(const TorusFunction& v, double s) {
  if (!(s > 0.0 && s < 1.0)) throw domain_error("apply_frac_torus_spectral: s must lie in (0,1)");
  TorusSpectrum c = dft(v);
  const TorusFunction layout(v.N(), v.d());
  for (std::size_t flat = 0; flat < c.coeffs.size(); ++flat) {
    c.coeffs[flat] *= torus_symbol(v.N(), layout.site(flat), s);
  }
  return idft(c);
}

TorusKernel::TorusKernel(long N, int d, double s, double tol)
    : N_(N), d_(d), s_(s), table_(N, d) {
  const FracParams p(s, torus_mesh(N), d);
  // The kernel is invariant under sign flips and permutations of the coordinates.
  std::map<Site, double> cache;
  auto values = table_.values();
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    Site j = table_.site(flat);
    for (long& c : j) c = c < 0 ? -c : c;
    std::sort(j.begin(), j.end());
    if (is_origin(j)) continue;
    auto it = cache.find(j);
    if (it == cache.end()) it = cache.emplace(j, torus_kernel(p, N, j, tol)).first;
    values[flat] = it->second;
  }
}

double TorusKernel::operator()(SiteView j) const { return table_(j); }

TorusFunction apply_frac_torus_pointwise(const TorusFunction& v, const TorusKernel& kernel) {
  if (v.N() != kernel.N() || v.d() != kernel.d()) {
    throw precondition_error("apply_frac_torus_pointwise: kernel does not match the torus");
  }
  TorusFunction out(v.N(), v.d());
  const auto vals = v.values();
  const std::size_t size = vals.size();
  std::vector<Site> sites(size);
  for (std::size_t a = 0; a < size; ++a) sites[a] = v.site(a);
  Site diff(static_cast<std::size_t>(v.d()));
  for (std::size_t a = 0; a < size; ++a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < size; ++b) {
      if (a == b) continue;
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = sites[a][k] - sites[b][k];
      acc += (vals[a] - vals[b]) * kernel(diff);
    }
    out.values()[a] = acc;
  }
  return out;
}

TorusFunction apply_frac_torus_pointwise(const TorusFunction& v, double s, double tol) {
  return apply_frac_torus_pointwise(v, TorusKernel(v.N(), v.d(), s, tol));
}

double sobolev_norm_periodic(std::span<const double> values, long N, int d, double h, double r) {
  const TorusFunction v(N, d, std::vector<double>(values.begin(), values.end()));
  const TorusSpectrum c = dft(v);
  const double n = static_cast<double>(2 * N + 1);
  double sum = 0.0;
  for (std::size_t flat = 0; flat < c.coeffs.size(); ++flat) {
    const Site k = v.site(flat);
    double weight = 1.0;
    for (long kc : k) {
      const double sn = std::sin(2.0 * std::numbers::pi * static_cast<double>(kc) / n);
      weight += sn * sn / (h * h);
    }
    sum += std::norm(c.coeffs[flat]) * std::pow(weight, r);
  }
  return std::sqrt(std::pow(n, d) * sum);
}

double sobolev_norm(const TorusFunction& v, double r) {
  return sobolev_norm_periodic(v.values(), v.N(), v.d(), v.h(), r);
}

}  // namespace fdl
