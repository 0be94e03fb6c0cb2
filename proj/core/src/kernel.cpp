#include "fdl/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fdl/errors.hpp"
#include "fdl/quadrature.hpp"
#include "fdl/specfun.hpp"
#include "semigroup.hpp"

namespace fdl {

namespace detail {

double tail_cut(long max_abs) {
  const double m = static_cast<double>(max_abs);
  return std::max(50.0, 30.0 * m * m);
}

double semigroup_head(SiteView m, double s) {
  const auto d = static_cast<double>(m.size());
  const auto total = static_cast<double>(l1_norm(m));
  double log_fact = 0.0;
  for (long c : m) log_fact += log_gamma(std::abs(static_cast<double>(c)) + 1.0);
  const double t0 = kHeadCut;
  // e^{-2t} I_k(2t) = t^k/k! (1 - 2t + O(t^2))
  const double lead = std::pow(t0, total - s) / (total - s);
  const double next = 2.0 * d * std::pow(t0, total + 1.0 - s) / (total + 1.0 - s);
  return std::exp(-log_fact) * (lead - next);
}

double semigroup_tail(SiteView m, double s, double T) {
  constexpr int kTerms = 12;
  // e^{-2t} I_k(2t) ~ (4 pi t)^{-1/2} sum_j coeff_j t^{-j}
  std::vector<double> product(kTerms, 0.0);
  product[0] = 1.0;
  for (long c : m) {
    const double mu = 4.0 * static_cast<double>(c) * static_cast<double>(c);
    std::vector<double> coeff(kTerms, 0.0);
    coeff[0] = 1.0;
    for (int k = 1; k < kTerms; ++k) {
      const double odd = 2.0 * k - 1.0;
      coeff[k] = -coeff[k - 1] * (mu - odd * odd) / (16.0 * k);
    }
    std::vector<double> next(kTerms, 0.0);
    for (int a = 0; a < kTerms; ++a) {
      for (int b = 0; a + b < kTerms; ++b) next[a + b] += product[a] * coeff[b];
    }
    product.swap(next);
  }
  const double half_d = 0.5 * static_cast<double>(m.size());
  double sum = 0.0;
  for (int j = 0; j < kTerms; ++j) {
    const double expo = s + half_d + j;
    sum += product[j] * std::pow(T, -expo) / expo;
  }
  return std::pow(4.0 * std::numbers::pi, -half_d) * sum;
}

double semigroup_scale(double s, double h) {
  return std::exp(-2.0 * s * std::log(h) - log_abs_gamma_neg(s));
}

}  // namespace detail

namespace {

void require_dimension(const FracParams& p, SiteView m, const char* who) {
  if (static_cast<int>(m.size()) != p.d()) {
    throw precondition_error(std::string(who) + ": offset dimension does not match d");
  }
}

long positive_mod(long a, long n) {
  const long r = a % n;
  return r < 0 ? r + n : r;
}

// Images of j under the torus period that are closest to the origin, componentwise.
Site nearest_representative(SiteView j, long n) {
  Site out(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    const long r = positive_mod(j[k], n);
    out[k] = std::min(r, n - r);
  }
  return out;
}

double log_kernel_constant_1d(const FracParams& p) {
  const double s = p.s();
  return 2.0 * s * std::log(2.0) + log_gamma(0.5 + s) - 0.5 * std::log(std::numbers::pi) -
         log_abs_gamma_neg(s) - 2.0 * s * std::log(p.h());
}

// sum_{k in Z} e^{-2t} I_{|k n + r|}(2t) for every residue r in [0, n).
std::vector<double> periodized_heat_1d(long n, double t) {
  std::vector<double> folded(static_cast<std::size_t>(n), 0.0);
  const double arg = 2.0 * t;
  // Orders beyond this carry less than ~1e-300 of the mass.
  const long reach = static_cast<long>(std::ceil(arg + 40.0 * std::sqrt(arg + 1.0) + 40.0));
  const std::vector<double> seq = bessel_i_scaled_sequence(reach, arg);
  folded[0] += seq[0];
  for (long k = 1; k <= reach; ++k) {
    const double v = seq[static_cast<std::size_t>(k)];
    folded[static_cast<std::size_t>(positive_mod(k, n))] += v;
    folded[static_cast<std::size_t>(positive_mod(-k, n))] += v;
  }
  return folded;
}

// Periodized heat kernel minus its limit 1/n at residue r, from the eigen-expansion; accurate
// for moderate and large t.
double periodized_heat_excess(long n, long r, double t) {
  const double dn = static_cast<double>(n);
  double sum = 0.0;
  for (long k = 1; 2 * k < n; ++k) {
    const double sn = std::sin(std::numbers::pi * static_cast<double>(k) / dn);
    sum += std::exp(-4.0 * sn * sn * t) *
           std::cos(2.0 * std::numbers::pi * static_cast<double>(k * r % n) / dn);
  }
  return 2.0 * sum / dn;
}

}  // namespace

double kernel_constant_1d(const FracParams& p) { return std::exp(log_kernel_constant_1d(p)); }

double kernel_1d(const FracParams& p, long m) {
  if (m == 0) return 0.0;
  const double a = std::abs(static_cast<double>(m));
  return kernel_constant_1d(p) * gamma_ratio(a - p.s(), a + 1.0 + p.s());
}

KernelValue kernel_nd(const FracParams& p, SiteView m, double tol) {
  require_dimension(p, m, "kernel_nd");
  if (is_origin(m)) throw precondition_error("kernel_nd: offset must be nonzero");
  if (!(tol > 0.0)) throw precondition_error("kernel_nd: tol must be positive");
  const double s = p.s();
  const double T = detail::tail_cut(linf_norm(m));
  const double head = detail::semigroup_head(m, s);
  const double tail = detail::semigroup_tail(m, s, T);
  auto integrand = [m, s](double u) {
    const double t = std::exp(u);
    double g = std::exp(-s * u);
    for (long c : m) g *= bessel_i_scaled(c, 2.0 * t);
    return g;
  };
  QuadratureOptions opts;
  opts.rel_tol = std::max(0.25 * tol, 1e-13);
  const double lo = std::log(detail::kHeadCut);
  const double hi = std::log(T);
  // Break at t = 1 and at the diffusive scale of the offset, where the integrand peaks.
  const double peak = std::clamp(std::log(0.25 * static_cast<double>(l1_norm(m) * l1_norm(m))) , 0.5, hi - 0.5);
  QuadratureResult left = integrate_gk(integrand, lo, 0.0, opts);
  QuadratureResult mid = integrate_gk(integrand, 0.0, peak, opts);
  QuadratureResult right = integrate_gk(integrand, peak, hi, opts);
  const double raw = head + left.value + mid.value + right.value + tail;
  const double raw_err = left.error + mid.error + right.error + 1e-15 * std::abs(raw);
  const double scale = detail::semigroup_scale(s, p.h());
  KernelValue out{scale * raw, scale * raw_err};
  if (out.abs_err > tol * out.value) {
    throw tolerance_failure("kernel_nd: accuracy target missed", out.abs_err / out.value, tol);
  }
  return out;
}

double kernel_tail_sum_1d(const FracParams& p, long M) {
  if (M < 1) throw precondition_error("kernel_tail_sum_1d: M must be at least 1");
  const double s = p.s();
  const auto x = static_cast<double>(M);
  return kernel_constant_1d(p) * gamma_ratio(x - s, x + s) / (2.0 * s);
}

double kernel_total_mass(const FracParams& p, double tol) {
  const double s = p.s();
  const int d = p.d();
  if (d == 1) return 2.0 * kernel_tail_sum_1d(p, 1);
  // sum_{m != 0} G(m, t) = 1 - G(0, t)
  auto one_minus = [d](double t) {
    if (t < 1.0) {
      // 1 - e^{-2t} I_0(2t) without cancellation.
      double series = 0.0;
      double term = 1.0;
      for (int k = 1; k < 40; ++k) {
        term *= t * t / (static_cast<double>(k) * k);
        series += term;
        if (term < 1e-18 * series) break;
      }
      const double delta = -std::expm1(-2.0 * t) - std::exp(-2.0 * t) * series;
      return -std::expm1(d * std::log1p(-delta));
    }
    return 1.0 - std::pow(bessel_i_scaled(0, 2.0 * t), d);
  };
  const double t0 = detail::kHeadCut;
  const double T = 1e4;
  // 1 - G(0,t) = 2 d t + O(t^2) near 0.
  const double head = 2.0 * d * std::pow(t0, 1.0 - s) / (1.0 - s);
  const Site origin(static_cast<std::size_t>(d), 0);
  const double tail = 1.0 / (s * std::pow(T, s)) - detail::semigroup_tail(origin, s, T);
  QuadratureOptions opts;
  opts.rel_tol = std::max(tol, 1e-13);
  auto integrand = [&](double u) { return one_minus(std::exp(u)) * std::exp(-s * u); };
  const double mid = integrate_gk(integrand, std::log(t0), 0.0, opts).value +
                     integrate_gk(integrand, 0.0, std::log(T), opts).value;
  return detail::semigroup_scale(s, p.h()) * (head + mid + tail);
}

double kernel_upper_bound(const FracParams& p, long l1) {
  if (l1 < 1) throw precondition_error("kernel_upper_bound: l1 norm must be at least 1");
  const double s = p.s();
  const double d = p.d();
  const double L = static_cast<double>(l1);
  const double log_c = -2.0 * s * std::log(p.h()) + d * (d + 2.0 * s - 1.0) * std::log(2.0) +
                       2.0 * s * std::log(2.0) + log_gamma(0.5 * d + s) -
                       0.5 * d * std::log(std::numbers::pi) - log_abs_gamma_neg(s);
  return std::exp(log_c) * gamma_ratio(L - s, L + d + s);
}

double kernel_l1_tail_bound(const FracParams& p, long radius) {
  if (radius < 1) throw precondition_error("kernel_l1_tail_bound: radius must be at least 1");
  const int d = p.d();
  const double s = p.s();
  // Number of points of Z^d with l1 norm L: sum_k 2^k C(d,k) C(L-1,k-1).
  auto shell = [d](long L) {
    double count = 0.0;
    double binom_d = 1.0;
    for (int k = 1; k <= d; ++k) {
      binom_d *= static_cast<double>(d - k + 1) / k;
      double binom_l = 1.0;
      for (int i = 1; i < k; ++i) binom_l *= static_cast<double>(L - i) / i;
      if (L - 1 < k - 1) binom_l = 0.0;
      count += std::ldexp(binom_d * binom_l, k);
    }
    return count;
  };
  const long explicit_end = radius + 20000;
  double sum = 0.0;
  for (long L = radius + 1; L <= explicit_end; ++L) sum += shell(L) * kernel_upper_bound(p, L);
  // Beyond explicit_end: shell(L) <= 2^d (L+d-1)^{d-1}/(d-1)! and
  // Gamma(x)/Gamma(x+a) <= x^{-a}(1+1/x) with x = L - s.
  const double R2 = static_cast<double>(explicit_end);
  const double x0 = R2 + 1.0 - s;
  const double growth = std::pow((R2 + static_cast<double>(d)) / x0, d - 1);
  const double log_shell_c = d * std::log(2.0) - log_gamma(static_cast<double>(d));
  const double bound_c = kernel_upper_bound(p, 1) / gamma_ratio(1.0 - s, 1.0 + d + s);
  const double far = std::exp(log_shell_c) * growth * bound_c * (1.0 + 1.0 / (R2 - s)) *
                     std::pow(R2 - s, -2.0 * s) / (2.0 * s);
  return sum + far;
}

double heat_kernel(SiteView m, double t) {
  if (!(t >= 0.0)) throw domain_error("heat_kernel: t must be nonnegative");
  double g = 1.0;
  for (long c : m) g *= bessel_i_scaled(c, 2.0 * t);
  return g;
}

double torus_mesh(long N) {
  if (N < 1) throw precondition_error("torus_mesh: N must be positive");
  return 2.0 * std::numbers::pi / static_cast<double>(2 * N + 1);
}

double torus_heat_kernel(long N, double h, SiteView j, double t, double tol) {
  if (N < 1) throw precondition_error("torus_heat_kernel: N must be positive");
  if (!(t > 0.0) || !(h > 0.0)) throw domain_error("torus_heat_kernel: t and h must be positive");
  const long n = 2 * N + 1;
  const double arg = 2.0 * t / (h * h);
  constexpr long kBudget = 100000;
  double g = 1.0;
  for (long jk : j) {
    double sum = bessel_i_scaled(jk, arg);
    long l = 1;
    for (; l < kBudget; ++l) {
      const double up = bessel_i_scaled(jk + l * n, arg);
      const double down = bessel_i_scaled(jk - l * n, arg);
      sum += up + down;
      if (up + down < tol * sum && std::abs(static_cast<double>(l * n)) > arg) break;
    }
    if (l == kBudget) {
      throw tolerance_failure("torus_heat_kernel: image sum did not settle", 1.0, tol);
    }
    g *= sum;
  }
  return g;
}

double torus_heat_kernel_spectral(long N, double h, SiteView j, double t) {
  if (N < 1) throw precondition_error("torus_heat_kernel_spectral: N must be positive");
  const long n = 2 * N + 1;
  const double rate = 2.0 * t / (h * h);
  double g = 1.0;
  for (long jk : j) {
    double sum = 0.0;
    for (long k = -N; k <= N; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      const double phase = angle * static_cast<double>(jk);
      sum += std::cos(phase) * std::exp(rate * (std::cos(angle) - 1.0));
    }
    g *= sum / static_cast<double>(n);
  }
  return g;
}

double torus_kernel_1d_partial(const FracParams& p, long N, long j, long terms) {
  const long n = 2 * N + 1;
  const long r = positive_mod(j, n);
  if (r == 0) throw precondition_error("torus_kernel: offset must be nonzero on the torus");
  double sum = 0.0;
  for (long k = 0; k < terms; ++k) {
    sum += kernel_1d(p, r + k * n) + kernel_1d(p, (k + 1) * n - r);
  }
  return sum;
}

double torus_kernel_1d_series(const FracParams& p, long N, long j, long terms, double tol) {
  if (terms < 0) throw precondition_error("torus_kernel_1d_series: negative term count");
  const long n = 2 * N + 1;
  const long r = positive_mod(j, n);
  if (r == 0) throw precondition_error("torus_kernel: offset must be nonzero on the torus");
  const double s = p.s();
  const double nn = static_cast<double>(n);
  const double rr = static_cast<double>(r);
  const double shift = static_cast<double>(terms) * nn;
  // Gamma(m-s)/Gamma(m+1+s) = int_0^1 x^{m-s-1} (1-x)^{2s} dx / Gamma(1+2s), summed over images.
  auto near_zero = [=](double x) {
    if (x <= 0.0) return 0.0;
    const double lx = std::log(x);
    const double images = std::exp((rr + shift - s - 1.0) * lx) + std::exp((nn - rr + shift - s - 1.0) * lx);
    return std::pow(1.0 - x, 2.0 * s) * images / (-std::expm1(nn * lx));
  };
  auto near_one = [=](double y) {
    if (y <= 0.0) return 0.0;
    const double lx = std::log1p(-y);
    const double images = std::exp((rr + shift - s - 1.0) * lx) + std::exp((nn - rr + shift - s - 1.0) * lx);
    return std::pow(y, 2.0 * s) * images / (-std::expm1(nn * lx));
  };
  QuadratureOptions opts;
  opts.rel_tol = std::max(tol, 1e-10);
  const double integral = integrate_endpoint_singular(near_zero, 0.0, 0.5, opts).value +
                          integrate_endpoint_singular(near_one, 0.0, 0.5, opts).value;
  const double remainder = kernel_constant_1d(p) * integral / std::exp(log_gamma(1.0 + 2.0 * s));
  return torus_kernel_1d_partial(p, N, j, terms) + remainder;
}

double torus_kernel_heat_integral(const FracParams& p, long N, SiteView j, double tol) {
  require_dimension(p, j, "torus_kernel");
  const long n = 2 * N + 1;
  const Site rep = nearest_representative(j, n);
  if (is_origin(rep)) throw precondition_error("torus_kernel: offset must be nonzero on the torus");
  const double s = p.s();
  const int d = p.d();
  const double floor_mass = std::pow(static_cast<double>(n), -d);
  auto periodized = [&](double t) {
    const std::vector<double> g = periodized_heat_1d(n, t);
    double prod = 1.0;
    for (long r : rep) prod *= g[static_cast<std::size_t>(r)];
    return prod;
  };
  QuadratureOptions opts;
  opts.rel_tol = std::max(0.25 * tol, 1e-13);
  // (0, 1]: integrate in log t after the analytic head.
  auto small = [&](double u) { return periodized(std::exp(u)) * std::exp(-s * u); };
  double total = detail::semigroup_head(rep, s);
  total += integrate_gk(small, std::log(detail::kHeadCut), 0.0, opts).value;
  // [1, inf): subtract the uniform limit, which decays like exp(-lambda_1 t). The product of the
  // one-dimensional factors 1/n + e_i is expanded so the limit cancels exactly.
  const double lambda1 = 4.0 * std::pow(std::sin(std::numbers::pi / static_cast<double>(n)), 2);
  const double T = (std::log(1.0 / tol) + 10.0) / lambda1;
  const double inv_n = 1.0 / static_cast<double>(n);
  auto large = [&](double u) {
    const double t = std::exp(u);
    double prod = 1.0;
    double excess = 0.0;
    for (long r : rep) {
      const double e = periodized_heat_excess(n, r, t);
      excess = excess * (inv_n + e) + prod * e;
      prod *= inv_n;
    }
    return excess * std::exp(-s * u);
  };
  opts.abs_tol = 0.25 * tol * std::abs(total + floor_mass / s);
  total += integrate_gk(large, 0.0, std::log(T), opts).value;
  total += floor_mass / s;
  return detail::semigroup_scale(s, p.h()) * total;
}

double torus_kernel(const FracParams& p, long N, SiteView j, double tol) {
  require_dimension(p, j, "torus_kernel");
  if (std::abs(p.h() - torus_mesh(N)) > 1e-12 * torus_mesh(N)) {
    throw precondition_error("torus_kernel: h must equal 2 pi/(2N+1)");
  }
  if (p.d() == 1) return torus_kernel_1d_series(p, N, j[0], 64, tol);
  return torus_kernel_heat_integral(p, N, j, tol);
}

}  // namespace fdl
