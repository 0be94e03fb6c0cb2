#include "fdl/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "fdl/errors.hpp"
#include "fdl/quadrature.hpp"

namespace fdl {

namespace {

// Lanczos approximation with g = 607/128 and 14 terms.
constexpr std::array<double, 14> kLanczos = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};

double lanczos_log_gamma(double x) {
  double y = x;
  double tmp = x + 5.24218750000000000;
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double ser = 0.999999999999997092;
  for (double c : kLanczos) ser += c / ++y;
  return tmp + std::log(2.5066282746310005 * ser / x);
}

// log Gamma(b + delta) - log Gamma(b) for large b by differencing Stirling's series.
double log_gamma_shift_large(double b, double delta) {
  const double z = b + delta;
  double r = (z - 0.5) * std::log1p(delta / b) + delta * std::log(b) - delta;
  r += -delta / (12.0 * b * z);
  r -= (1.0 / (z * z * z) - 1.0 / (b * b * b)) / 360.0;
  return r;
}

double hankel_scaled_i(long n, double x) {
  const double mu = 4.0 * static_cast<double>(n) * static_cast<double>(n);
  double term = 1.0;
  double sum = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * x);
    const double mag = std::abs(term);
    if (mag > prev && k > 2) break;  // asymptotic series started to diverge
    sum += term;
    if (mag < 1e-17 * std::abs(sum)) break;
    prev = mag;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

// Power series summed outward from its largest term, in log-scaled form.
double series_scaled_i(long n, double x) {
  const double q = 0.5 * x;
  const double nn = static_cast<double>(n);
  // Largest term: (k+1)(k+n+1) ~ q^2.
  const double kpeak = std::max(0.0, std::floor(std::sqrt(q * q + 0.25 * nn * nn) - 0.5 * nn - 1.0));
  const double log_peak = (2.0 * kpeak + nn) * std::log(q) - log_gamma(kpeak + 1.0) -
                          log_gamma(kpeak + nn + 1.0) - x;
  const double q2 = q * q;
  double sum = 1.0;
  double term = 1.0;
  for (double k = kpeak;; k += 1.0) {
    term *= q2 / ((k + 1.0) * (k + nn + 1.0));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  term = 1.0;
  for (double k = kpeak; k > 0.0; k -= 1.0) {
    term *= k * (k + nn) / q2;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(log_peak) * sum;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw domain_error("log_gamma: argument must be positive");
  if (std::isinf(x)) return x;
  return lanczos_log_gamma(x);
}

double gamma_ratio(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw domain_error("gamma_ratio: arguments must be positive");
  if (a > 1e4 && b > 1e4 && std::abs(a - b) <= 4.0) {
    return std::exp(log_gamma_shift_large(b, a - b));
  }
  return std::exp(log_gamma(a) - log_gamma(b));
}

double log_abs_gamma_neg(double s) {
  if (!(s > 0.0 && s < 1.0)) throw domain_error("log_abs_gamma_neg: s must lie in (0,1)");
  // Gamma(-s) Gamma(1+s) = -pi / sin(pi s)
  return std::log(std::numbers::pi) - std::log(std::sin(std::numbers::pi * s)) - log_gamma(1.0 + s);
}

double bessel_i_scaled(long n, double t) {
  if (!(t >= 0.0)) throw domain_error("bessel_i_scaled: t must be nonnegative");
  n = n < 0 ? -n : n;
  if (t == 0.0) return n == 0 ? 1.0 : 0.0;
  const double nn = static_cast<double>(n);
  // The asymptotic series needs 8t well above 4n^2 to reach full precision.
  const double value =
      t > std::max(20.0, nn * nn) ? hankel_scaled_i(n, t) : series_scaled_i(n, t);
  return std::clamp(value, 0.0, 1.0);
}

std::vector<double> bessel_i_scaled_sequence(long max_order, double t) {
  if (!(t >= 0.0)) throw domain_error("bessel_i_scaled_sequence: t must be nonnegative");
  if (max_order < 0) throw domain_error("bessel_i_scaled_sequence: negative order");
  const auto count = static_cast<std::size_t>(max_order) + 1;
  std::vector<double> out(count, 0.0);
  if (t == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const long start =
      std::max(max_order, static_cast<long>(std::ceil(std::sqrt(90.0 * t) + 0.5 * std::exp(1.0) * std::min(t, 60.0)))) + 30;
  double above = 0.0;
  double current = 1e-280;
  double norm = 0.0;
  for (long k = start; k >= 1; --k) {
    const double below = (2.0 * static_cast<double>(k) / t) * current + above;
    if (k <= max_order) out[static_cast<std::size_t>(k)] = current;
    norm += 2.0 * current;
    above = current;
    current = below;
    if (current > 1e250) {
      constexpr double shrink = 1e-250;
      current *= shrink;
      above *= shrink;
      norm *= shrink;
      for (long j = k; j <= max_order; ++j) out[static_cast<std::size_t>(j)] *= shrink;
    }
  }
  out[0] = current;
  norm += current;
  for (double& v : out) v /= norm;
  return out;
}

double bessel_k(double s, double x) {
  if (!(s > 0.0 && s < 1.0)) throw domain_error("bessel_k: order must lie in (0,1)");
  if (!(x > 0.0)) throw domain_error("bessel_k: argument must be positive");
  if (x >= 30.0) {
    const double mu = 4.0 * s * s;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 40; ++k) {
      const double odd = 2.0 * k - 1.0;
      term *= (mu - odd * odd) / (8.0 * k * x);
      sum += term;
      if (std::abs(term) < 1e-17 * sum) break;
    }
    return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) * sum;
  }
  // e^x K_s(x) = int_0^inf exp(-x (cosh u - 1)) cosh(s u) du; past `upper` the integrand is
  // below e^{-745}.
  const double upper = std::acosh(1.0 + 760.0 / x) + 1.0;
  auto integrand = [s, x](double u) {
    return std::exp(-2.0 * x * std::sinh(0.5 * u) * std::sinh(0.5 * u)) * std::cosh(s * u);
  };
  // Subdivide at the scale where the double-exponential cutoff sets in.
  const double knee = std::max(0.5, std::log(2.0 / x));
  QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  double total = 0.0;
  if (knee < upper) {
    total = integrate_gk(integrand, 0.0, knee, opts).value;
    opts.abs_tol = 1e-14 * total;
    total += integrate_gk(integrand, knee, upper, opts).value;
  } else {
    total = integrate_gk(integrand, 0.0, upper, opts).value;
  }
  total *= std::exp(-x);
  return total;
}

double extension_profile(double s, double x) {
  if (!(s > 0.0 && s < 1.0)) throw domain_error("extension_profile: s must lie in (0,1)");
  if (!(x >= 0.0)) throw domain_error("extension_profile: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (x <= 2.0) {
    // theta = sum_k (x/2)^{2k}/k! [G(1-s)/G(k+1-s) - G(1-s)/G(k+1+s) (x/2)^{2s}]
    const double q2 = 0.25 * x * x;
    double a = 1.0;
    double b = std::exp(log_gamma(1.0 - s) - log_gamma(1.0 + s) + s * std::log(q2));
    double sum = a - b;
    for (int k = 1; k < 200; ++k) {
      a *= q2 / (k * (k - s));
      b *= q2 / (k * (k + s));
      sum += a - b;
      if (std::abs(a) + std::abs(b) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  const double log_scale = (1.0 - s) * std::log(2.0) + s * std::log(x) - log_gamma(s);
  return std::exp(log_scale) * bessel_k(s, x);
}

double extension_profile_weighted_slope(double s, double x) {
  if (!(s > 0.0 && s < 1.0)) throw domain_error("extension_profile_weighted_slope: s in (0,1)");
  if (!(x > 0.0)) throw domain_error("extension_profile_weighted_slope: x must be positive");
  // d/dx [x^s K_s(x)] = -x^s K_{1-s}(x)
  const double log_scale = (1.0 - s) * std::log(2.0) + (1.0 - s) * std::log(x) - log_gamma(s);
  return -std::exp(log_scale) * bessel_k(1.0 - s, x);
}

}  // namespace fdl
