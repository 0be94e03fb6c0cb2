#pragma once

#include <vector>

namespace fdl {

/// Natural logarithm of the Gamma function for x > 0.
double log_gamma(double x);

/// Gamma(a) / Gamma(b) for a, b > 0.
double gamma_ratio(double a, double b);

/// log |Gamma(-s)| for s in (0,1), through the reflection formula.
double log_abs_gamma_neg(double s);

/// e^{-t} I_n(t), the exponentially scaled modified Bessel function of integer order.
double bessel_i_scaled(long n, double t);

/// e^{-t} I_k(t) for k = 0..max_order, by normalized backward recurrence.
std::vector<double> bessel_i_scaled_sequence(long max_order, double t);

/// Macdonald function K_s(x) for 0 < s < 1, x > 0.
double bessel_k(double s, double x);

/// 2^{1-s} x^s K_s(x) / Gamma(s), continuous at x = 0 with value 1.
double extension_profile(double s, double x);

/// x^{1-2s} times the derivative of extension_profile(s, .) at x > 0.
double extension_profile_weighted_slope(double s, double x);

}  // namespace fdl
