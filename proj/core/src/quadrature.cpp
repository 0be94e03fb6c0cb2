#include "fdl/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fdl/errors.hpp"

namespace fdl {

namespace {

// Kronrod 15-point abscissae and weights; odd entries carry the embedded Gauss 7-point rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double res_k = fc * kWgk[7];
  double res_g = fc * kWg[3];
  double res_abs = std::abs(res_k);
  std::array<double, 7> f1{}, f2{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    res_k += kWgk[j] * (f1[j] + f2[j]);
    res_abs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) res_g += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    res_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  res_k *= half;
  res_abs *= std::abs(half);
  res_asc *= std::abs(half);
  double err = std::abs((res_k - res_g * half));
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * res_abs, err);
  }
  return {a, b, res_k, err};
}

void check(const QuadratureResult& r, const QuadratureOptions& opts, const char* who) {
  const double target = std::max(opts.rel_tol * std::abs(r.value), opts.abs_tol);
  if (!(r.error <= target) || !std::isfinite(r.value)) {
    throw tolerance_failure(std::string(who) + ": quadrature did not converge", r.error, target);
  }
}

}  // namespace

QuadratureResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                              const QuadratureOptions& opts) {
  if (a == b) return {};
  const std::size_t max_panels = std::size_t{1} << std::min(opts.max_depth, 20u);
  std::priority_queue<Panel> heap;
  Panel first = kronrod15(f, a, b);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  // The margin keeps the final re-summed estimate on the right side of the target.
  auto done = [&] {
    return total_err <= 0.5 * std::max(opts.rel_tol * std::abs(total), opts.abs_tol);
  };
  while (!done() && heap.size() < max_panels) {
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b)) break;
    heap.pop();
    const Panel left = kronrod15(f, worst.a, mid);
    const Panel right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the running totals.
  QuadratureResult r;
  while (!heap.empty()) {
    r.value += heap.top().value;
    r.error += heap.top().error;
    heap.pop();
  }
  check(r, opts, "integrate_gk");
  return r;
}

QuadratureResult integrate_endpoint_singular(const std::function<double(double)>& f, double a,
                                             double b, const QuadratureOptions& opts) {
  boost::math::quadrature::tanh_sinh<double> rule(std::min(opts.max_depth, 15u));
  QuadratureResult r;
  r.value = rule.integrate(f, a, b, opts.rel_tol, &r.error);
  check(r, opts, "integrate_endpoint_singular");
  return r;
}

}  // namespace fdl
