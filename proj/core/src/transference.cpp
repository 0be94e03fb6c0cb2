#include "fdl/transference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fdl/errors.hpp"

namespace fdl {

namespace {

constexpr double kSharpness = 4.0;
// erfc(kSharpness * x) is below 1e-17 once x exceeds this.
constexpr double kWindowReach = 1.5;

struct WindowPlan {
  long large = 0;
  long small = 0;
};

WindowPlan plan_for(int d) {
  if (d == 1) return {240, 200};
  if (d == 2) return {72, 60};
  return {24, 20};
}

long box_radius(long window) {
  return static_cast<long>(std::ceil((2.0 + kWindowReach) * static_cast<double>(window))) + 1;
}

long support_radius(const LatticeFunction& phi) {
  long r = 0;
  for (const auto& [site, value] : phi.sparse_part()) r = std::max(r, linf_norm(site));
  return r;
}

}  // namespace

LatticeOperator transference_operator(double s, long N, int d, long support_radius) {
  const FracParams p(s, torus_mesh(N), d);
  return {p, box_radius(plan_for(d).large) + support_radius};
}

TransferenceResult transference_check(const TorusFunction& v, const LatticeFunction& phi,
                                      const LatticeOperator& op, double tol) {
  const FracParams& p = phi.params();
  const int d = p.d();
  if (!phi.finitely_supported()) throw precondition_error("transference_check: phi must be finitely supported");
  if (v.d() != d) throw precondition_error("transference_check: dimension mismatch");
  if (std::abs(p.h() - v.h()) > 1e-12 * v.h()) {
    throw precondition_error("transference_check: lattice mesh must equal the torus mesh");
  }
  const WindowPlan plan = plan_for(d);
  const long reach = box_radius(plan.large);
  if (op.table_radius() < reach + support_radius(phi)) {
    throw precondition_error("transference_check: operator table too small for the window");
  }

  TransferenceResult out;
  const TorusFunction image = apply_frac_torus_spectral(periodize(phi, v.N()), p.s());
  for (std::size_t a = 0; a < v.size(); ++a) out.torus_side += v.values()[a] * image.values()[a];

  const auto vals = v.values();
  const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
  const double S = op.total_mass();
  double sum_large = 0.0;
  double sum_small = 0.0;
  Site l(static_cast<std::size_t>(d), -reach);
  Site diff(static_cast<std::size_t>(d));
  while (true) {
    double psi = 0.0;
    for (const auto& [site, value] : phi.sparse_part()) {
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = l[k] - site[k];
      psi += is_origin(diff) ? value * S : -value * op.table()(diff);
    }
    const double oscillating = v(l) - mean;
    double radius = 0.0;
    for (long c : l) radius += static_cast<double>(c) * static_cast<double>(c);
    radius = std::sqrt(radius);
    auto weight = [radius](long L) {
      const double Ld = static_cast<double>(L);
      return 0.5 * std::erfc(kSharpness * (radius - 2.0 * Ld) / Ld);
    };
    sum_large += weight(plan.large) * oscillating * psi;
    sum_small += weight(plan.small) * oscillating * psi;
    std::size_t axis = l.size();
    while (axis-- > 0) {
      if (++l[axis] <= reach) break;
      l[axis] = -reach;
    }
    if (axis == static_cast<std::size_t>(-1)) break;
  }
  out.lattice_side = sum_large;
  out.window_error = std::abs(sum_large - sum_small);
  out.defect = std::abs(out.lattice_side - out.torus_side);
  out.scale = std::max({1.0, std::abs(out.lattice_side), std::abs(out.torus_side)});
  if (out.window_error > tol * out.scale) {
    throw tolerance_failure("transference_check: lattice side could not be certified",
                            out.window_error / out.scale, tol);
  }
  out.passed = out.defect <= tol * out.scale;
  return out;
}

TransferenceResult transference_check(const TorusFunction& v, const LatticeFunction& phi,
                                      double tol) {
  const LatticeOperator op =
      transference_operator(phi.params().s(), v.N(), phi.params().d(), support_radius(phi));
  return transference_check(v, phi, op, tol);
}

}  // namespace fdl
