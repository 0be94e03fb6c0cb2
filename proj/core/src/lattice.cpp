#include "fdl/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fdl/errors.hpp"

namespace fdl {

namespace {

constexpr double kRoundoff = 1e-15;

void require_dimension(const FracParams& p, SiteView j, const char* who) {
  if (static_cast<int>(j.size()) != p.d()) {
    throw precondition_error(std::string(who) + ": point dimension does not match d");
  }
}

double lookup(const SparseValues& values, SiteView j) {
  if (values.empty()) return 0.0;
  const auto it = values.find(Site(j.begin(), j.end()));
  return it == values.end() ? 0.0 : it->second;
}

}  // namespace

LatticeFunction::LatticeFunction(const FracParams& params, Shape shape)
    : params_(params), shape_(std::move(shape)) {
  auto check_sites = [&](const SparseValues& values) {
    for (const auto& [site, value] : values) {
      require_dimension(params_, site, "LatticeFunction");
      if (!std::isfinite(value)) throw domain_error("LatticeFunction: values must be finite");
    }
  };
  if (const auto* step = std::get_if<StepProfile>(&shape_)) {
    if (step->axis < 0 || step->axis >= params_.d()) {
      throw precondition_error("LatticeFunction: step axis out of range");
    }
    if (step->cutoff < 1) throw precondition_error("LatticeFunction: step cutoff must be positive");
    check_sites(step->perturbation);
  } else {
    check_sites(std::get<FinitelySupported>(shape_).support);
  }
}

LatticeFunction LatticeFunction::delta(const FracParams& params, SiteView at, double value) {
  FinitelySupported f;
  f.support.emplace(Site(at.begin(), at.end()), value);
  return {params, std::move(f)};
}

double LatticeFunction::background(SiteView j) const {
  const auto* step = std::get_if<StepProfile>(&shape_);
  if (step == nullptr) return 0.0;
  const long x = j[static_cast<std::size_t>(step->axis)];
  const auto it = step->axial.find(x);
  const double correction = it == step->axial.end() ? 0.0 : it->second;
  if (x <= -step->cutoff) return step->left + correction;
  if (x >= step->cutoff) return step->right + correction;
  return correction;
}

const SparseValues& LatticeFunction::sparse_part() const {
  if (const auto* step = std::get_if<StepProfile>(&shape_)) return step->perturbation;
  return std::get<FinitelySupported>(shape_).support;
}

double LatticeFunction::operator()(SiteView j) const {
  require_dimension(params_, j, "LatticeFunction");
  return background(j) + lookup(sparse_part(), j);
}

double LatticeFunction::sup_norm() const {
  double sup = 0.0;
  for (const auto& [site, value] : sparse_part()) sup = std::max(sup, std::abs((*this)(site)));
  if (const auto* step = std::get_if<StepProfile>(&shape_)) {
    sup = std::max({sup, std::abs(step->left), std::abs(step->right)});
    Site probe(static_cast<std::size_t>(params_.d()), 0);
    for (const auto& [x, value] : step->axial) {
      probe[static_cast<std::size_t>(step->axis)] = x;
      sup = std::max(sup, std::abs(background(probe)));
    }
  }
  return sup;
}

LatticeFunction LatticeFunction::scaled(double factor) const {
  Shape shape = shape_;
  auto scale = [factor](SparseValues& values) {
    for (auto& entry : values) entry.second *= factor;
  };
  if (auto* step = std::get_if<StepProfile>(&shape)) {
    step->left *= factor;
    step->right *= factor;
    for (auto& entry : step->axial) entry.second *= factor;
    scale(step->perturbation);
  } else {
    scale(std::get<FinitelySupported>(shape).support);
  }
  return {params_, std::move(shape)};
}

LatticeOperator::LatticeOperator(const FracParams& params, long table_radius)
    : params_(params),
      table_(params, table_radius),
      total_mass_(kernel_total_mass(params)),
      truncation_tail_(params.d() == 1 || table_radius < 1
                           ? 0.0
                           : kernel_l1_tail_bound(params, table_radius)) {}

double LatticeOperator::kernel(SiteView m) const {
  if (linf_norm(m) <= table_.radius()) return table_(m);
  if (params_.d() == 1) return kernel_1d(params_, m[0]);
  return kernel_nd(params_, m, 1e-12).value;
}

double LatticeOperator::halfline_sum_1d(long from) const {
  // sum_{k >= from} K(k), with K(0) = 0
  if (from >= 1) return kernel_tail_sum_1d(params_, from);
  return 2.0 * kernel_tail_sum_1d(params_, 1) - kernel_tail_sum_1d(params_, 1 - from);
}

ApplyResult LatticeOperator::apply(const LatticeFunction& u, SiteView j) const {
  require_dimension(params_, j, "apply_frac_lattice");
  if (const auto* step = std::get_if<StepProfile>(&u.shape())) {
    if (params_.d() == 1) return apply_step_1d(u, *step, j);
    return apply_step_truncated(u, j);
  }
  // Finite support: u_j S - sum_m u_m K(j - m), exact.
  const double uj = u(j);
  double value = uj * total_mass_;
  double magnitude = std::abs(value);
  Site diff(j.size());
  for (const auto& [site, um] : u.sparse_part()) {
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = j[k] - site[k];
    if (is_origin(diff)) continue;
    const double term = um * kernel(diff);
    value -= term;
    magnitude += std::abs(term);
  }
  const double rel = params_.d() == 1 ? kRoundoff : 1e-11;
  return {value, rel * magnitude};
}

ApplyResult LatticeOperator::apply_step_1d(const LatticeFunction& u, const StepProfile& step,
                                           SiteView j) const {
  const long x = j[0];
  const double uj = u(j);
  double value = uj * total_mass_;
  double magnitude = std::abs(value);
  const double far = step.left * halfline_sum_1d(x + step.cutoff) +
                     step.right * halfline_sum_1d(step.cutoff - x);
  value -= far;
  magnitude += std::abs(far);
  for (const auto& [site, pm] : step.axial) {
    if (site == x) continue;
    const double term = pm * kernel(Site{x - site});
    value -= term;
    magnitude += std::abs(term);
  }
  for (const auto& [site, pm] : step.perturbation) {
    if (site[0] == x) continue;
    const double term = pm * kernel(Site{x - site[0]});
    value -= term;
    magnitude += std::abs(term);
  }
  return {value, 4.0 * kRoundoff * magnitude};
}

ApplyResult LatticeOperator::apply_step_truncated(const LatticeFunction& u, SiteView j) const {
  const int d = params_.d();
  const long R = table_.radius();
  const double uj = u(j);
  Site k(static_cast<std::size_t>(d), -R);
  Site m(static_cast<std::size_t>(d));
  double value = 0.0;
  double magnitude = 0.0;
  // Odometer over the box, keeping the l1 ball.
  while (true) {
    if (l1_norm(k) <= R && !is_origin(k)) {
      for (std::size_t i = 0; i < k.size(); ++i) m[i] = j[i] - k[i];
      const double term = (uj - u(m)) * table_(k);
      value += term;
      magnitude += std::abs(term);
    }
    std::size_t axis = k.size();
    while (axis-- > 0) {
      if (++k[axis] <= R) break;
      k[axis] = -R;
    }
    if (axis == static_cast<std::size_t>(-1)) break;
  }
  const double bound = 2.0 * u.sup_norm() * truncation_tail_ + 1e-11 * magnitude;
  return {value, bound};
}

ApplyResult apply_frac_lattice(const LatticeFunction& u, SiteView j, double tol) {
  if (!(tol > 0.0)) throw precondition_error("apply_frac_lattice: tol must be positive");
  const FracParams& p = u.params();
  long radius = 1;
  for (const auto& [site, value] : u.sparse_part()) {
    Site diff(site.size());
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = j[k] - site[k];
    radius = std::max(radius, linf_norm(diff));
  }
  if (p.d() == 1 || u.finitely_supported()) {
    const LatticeOperator op(p, p.d() == 1 ? radius : std::min(radius, 64L));
    const ApplyResult r = op.apply(u, j);
    if (r.error_bound > tol) throw tolerance_failure("apply_frac_lattice", r.error_bound, tol);
    return r;
  }
  double achieved = 0.0;
  for (long R : {16L, 32L, 64L, 128L, 256L, 512L}) {
    if (2.0 * u.sup_norm() * kernel_l1_tail_bound(p, R) > tol) continue;
    const LatticeOperator op(p, std::max(R, radius));
    const ApplyResult r = op.apply(u, j);
    if (r.error_bound <= tol) return r;
    achieved = r.error_bound;
  }
  if (achieved == 0.0) achieved = 2.0 * u.sup_norm() * kernel_l1_tail_bound(p, 512);
  throw tolerance_failure("apply_frac_lattice: truncation tail too large", achieved, tol);
}

TorusFunction periodize(const LatticeFunction& u, long N) {
  if (!u.finitely_supported()) throw precondition_error("periodize: input must be finitely supported");
  TorusFunction out(N, u.params().d());
  for (const auto& [site, value] : u.sparse_part()) out(site) += value;
  return out;
}

PeriodicExtension repeat(const TorusFunction& v) { return PeriodicExtension(v); }

double sobolev_norm(const LatticeFunction& u, double r) {
  if (!u.finitely_supported()) throw precondition_error("sobolev_norm: input must be finitely supported");
  const int d = u.params().d();
  long extent = 1;
  for (const auto& [site, value] : u.sparse_part()) extent = std::max(extent, linf_norm(site));
  auto embedded = [&](long N) {
    TorusFunction v(N, d);
    for (const auto& [site, value] : u.sparse_part()) v(site) += value;
    return sobolev_norm_periodic(v.values(), N, d, u.params().h(), r);
  };
  long N = std::max(4L, 2 * extent);
  double previous = embedded(N);
  const std::size_t budget = d == 1 ? (std::size_t{1} << 22) : (std::size_t{1} << 22) / 2;
  while (true) {
    const long next = 2 * N;
    std::size_t size = 1;
    for (int k = 0; k < d; ++k) size *= static_cast<std::size_t>(2 * next + 1);
    if (size > budget) {
      throw tolerance_failure("sobolev_norm: embedding did not settle", 0.0, 1e-12);
    }
    const double current = embedded(next);
    if (std::abs(current - previous) <= 1e-12 * std::max(current, 1e-300)) return current;
    previous = current;
    N = next;
  }
}

}  // namespace fdl
