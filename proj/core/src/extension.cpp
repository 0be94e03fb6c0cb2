#include "fdl/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "fdl/errors.hpp"
#include "fdl/specfun.hpp"

namespace fdl {

namespace {

// Eigenvalues of -Delta on the torus, on the centered spectral layout.
std::vector<double> torus_eigenvalues(long N, int d) {
  const TorusFunction layout(N, d);
  std::vector<double> lambda(layout.size());
  for (std::size_t flat = 0; flat < lambda.size(); ++flat) {
    lambda[flat] = torus_symbol(N, layout.site(flat), 1.0);
  }
  return lambda;
}

template <class Profile>
std::vector<double> assemble_levels(const TorusSpectrum& c, std::span<const double> lambda,
                                    std::span<const double> heights, Profile&& profile) {
  // Symmetric frequencies share eigenvalues, so the profile is evaluated once per distinct one.
  std::vector<double> distinct(lambda.begin(), lambda.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::size_t> slot(lambda.size());
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    slot[k] = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), lambda[k]) - distinct.begin());
  }
  const std::size_t n = c.coeffs.size();
  std::vector<double> values;
  values.reserve(n * heights.size());
  std::vector<double> factor(distinct.size());
  TorusSpectrum scaled = c;
  for (double t : heights) {
    for (std::size_t i = 0; i < distinct.size(); ++i) factor[i] = profile(std::sqrt(distinct[i]), t);
    for (std::size_t k = 0; k < n; ++k) scaled.coeffs[k] = c.coeffs[k] * factor[slot[k]];
    const TorusFunction level = idft(scaled);
    values.insert(values.end(), level.values().begin(), level.values().end());
  }
  return values;
}

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

ExtensionField::ExtensionField(TorusFunction base, double s, std::vector<double> t_grid,
                               std::vector<double> values, TorusFunction slope)
    : base_(std::move(base)),
      s_(s),
      t_grid_(std::move(t_grid)),
      values_(std::move(values)),
      slope_(std::move(slope)) {
  if (!(s_ > 0.0 && s_ < 1.0)) throw domain_error("ExtensionField: s must lie in (0,1)");
  if (t_grid_.empty()) throw precondition_error("ExtensionField: empty height grid");
  if (t_grid_.front() < 0.0) throw precondition_error("ExtensionField: heights must be nonnegative");
  if (std::adjacent_find(t_grid_.begin(), t_grid_.end(), std::greater_equal<>()) != t_grid_.end()) {
    throw precondition_error("ExtensionField: heights must increase strictly");
  }
  if (values_.size() != t_grid_.size() * base_.size()) {
    throw precondition_error("ExtensionField: value count does not match grid");
  }
  if (slope_.N() != base_.N() || slope_.d() != base_.d()) {
    throw precondition_error("ExtensionField: slope lives on a different torus");
  }
}

std::span<const double> ExtensionField::level(std::size_t i) const {
  if (i >= levels()) throw precondition_error("ExtensionField: level out of range");
  return std::span<const double>(values_).subspan(i * base_.size(), base_.size());
}

std::vector<double> geometric_grid(double t_min, double t_max, double ratio) {
  if (!(t_min > 0.0 && t_max > t_min && ratio > 1.0)) {
    throw precondition_error("geometric_grid: need 0 < t_min < t_max and ratio > 1");
  }
  std::vector<double> grid;
  for (double t = t_min; t < t_max; t *= ratio) grid.push_back(t);
  grid.push_back(t_max);
  return grid;
}

double dtn_constant(double s) {
  if (!(s > 0.0 && s < 1.0)) throw domain_error("dtn_constant: s must lie in (0,1)");
  return std::exp(log_gamma(1.0 - s) - log_gamma(s) - (s - 0.5) * std::log(4.0));
}

ExtensionField cs_extend_torus(const TorusFunction& v, double s, std::span<const double> t_grid) {
  if (!(s > 0.0 && s < 1.0)) throw domain_error("cs_extend_torus: s must lie in (0,1)");
  const TorusSpectrum c = dft(v);
  const std::vector<double> lambda = torus_eigenvalues(v.N(), v.d());
  // Levels are assembled as v plus the departure from v, so modes that do not move (the constant
  // one in particular) leave the data untouched to the last bit.
  std::vector<double> values = assemble_levels(c, lambda, t_grid, [s](double root, double t) {
    return extension_profile(s, root * t) - 1.0;
  });
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += v.values()[i % v.size()];
  TorusSpectrum slope = c;
  const double ds = dtn_constant(s);
  for (std::size_t k = 0; k < slope.coeffs.size(); ++k) slope.coeffs[k] *= -ds * std::pow(lambda[k], s);
  return {v, s, std::vector<double>(t_grid.begin(), t_grid.end()), std::move(values), idft(slope)};
}

TorusFunction neumann_trace(const ExtensionField& field, std::size_t fit_points, double check_tol) {
  const auto t = field.t_grid();
  if (fit_points < 3 || fit_points > t.size()) {
    throw precondition_error("neumann_trace: fit_points must lie in [3, number of levels]");
  }
  if (!(t.front() > 0.0 && t.front() <= 1e-4)) {
    throw precondition_error("neumann_trace: grid too coarse, the lowest height must lie in (0, 1e-4]");
  }
  const double s = field.s();
  const auto n = static_cast<Eigen::Index>(fit_points);
  Eigen::MatrixXd design(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ti = t[static_cast<std::size_t>(i)];
    design(i, 0) = std::pow(ti, 2.0 * s);
    design(i, 1) = ti * ti;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);

  const TorusFunction& u = field.base();
  TorusFunction out(u.N(), u.d());
  Eigen::VectorXd rhs(n);
  double misfit = 0.0;
  double scale = 0.0;
  for (std::size_t flat = 0; flat < u.size(); ++flat) {
    for (Eigen::Index i = 0; i < n; ++i) {
      rhs(i) = field(static_cast<std::size_t>(i), flat) - u.values()[flat];
    }
    const Eigen::Vector2d coef = qr.solve(rhs);
    misfit = std::max(misfit, (design * coef - rhs).cwiseAbs().maxCoeff());
    scale = std::max(scale, rhs.cwiseAbs().maxCoeff());
    out.values()[flat] = -2.0 * s * coef(0);
  }
  // Relative to the largest departure from the boundary values; departures at round-off level
  // (nearly constant data) are measured against the data itself.
  const double floor = std::max(scale, 1e-10 * sup_abs(u.values()));
  const double worst_residual = floor > 0.0 ? misfit / floor : 0.0;
  if (worst_residual > 1e-5) {
    throw tolerance_failure("neumann_trace: grid too coarse for the boundary layer fit", worst_residual, 1e-5);
  }

  const TorusFunction reference = apply_frac_torus_spectral(u, s);
  const double ds = dtn_constant(s);
  double defect = 0.0;
  for (std::size_t flat = 0; flat < u.size(); ++flat) {
    defect = std::max(defect, std::abs(out.values()[flat] - ds * reference.values()[flat]));
  }
  const double ref_scale = ds * sup_abs(reference.values());
  if (defect > check_tol * ref_scale + 1e-10 * sup_abs(u.values())) {
    throw tolerance_failure("neumann_trace: fit disagrees with the spectral trace",
                            defect / std::max(ref_scale, std::numeric_limits<double>::min()), check_tol);
  }
  return out;
}

HalfBallNorms half_ball_norms(const ExtensionField& field, std::span<const double> center, double r) {
  const TorusFunction& u = field.base();
  const int d = u.d();
  if (!(r > 0.0)) throw precondition_error("half_ball_norms: r must be positive");
  if (static_cast<int>(center.size()) != d) throw precondition_error("half_ball_norms: center dimension");
  const double h = u.h();
  const double cell = std::pow(h, d);
  const auto t = field.t_grid();

  double bulk = 0.0;
  double trace = 0.0;
  double grad = 0.0;
  double normal = 0.0;
  std::vector<double> g(t.size());
  for (std::size_t flat = 0; flat < u.size(); ++flat) {
    const Site j = u.site(flat);
    double dist2 = 0.0;
    for (int k = 0; k < d; ++k) {
      const double dx = static_cast<double>(j[k]) * h - center[k];
      dist2 += dx * dx;
    }
    if (dist2 >= r * r) continue;

    const double top = std::sqrt(r * r - dist2);
    for (std::size_t i = 0; i < t.size(); ++i) g[i] = field(i, flat) * field(i, flat);
    double column = 0.0;
    std::size_t i = 0;
    for (; i + 1 < t.size() && t[i + 1] <= top; ++i) column += 0.5 * (g[i] + g[i + 1]) * (t[i + 1] - t[i]);
    if (i + 1 < t.size() && t[i] < top) {
      const double w = (top - t[i]) / (t[i + 1] - t[i]);
      const double g_top = (1.0 - w) * g[i] + w * g[i + 1];
      column += 0.5 * (g[i] + g_top) * (top - t[i]);
    }
    bulk += cell * column;

    const double uj = u.values()[flat];
    trace += cell * uj * uj;
    Site nb = j;
    for (int k = 0; k < d; ++k) {
      nb[k] = j[k] + 1;
      const double up = u(nb);
      nb[k] = j[k] - 1;
      const double down = u(nb);
      nb[k] = j[k];
      const double dk = (up - down) / (2.0 * h);
      grad += cell * dk * dk;
    }
    const double dt = field.weighted_slope().values()[flat];
    normal += cell * dt * dt;
  }
  return {std::sqrt(bulk), std::sqrt(trace), std::sqrt(trace + grad), std::sqrt(normal)};
}

bool boundary_bulk_holds(const BoundaryBulkReport& report, double alpha, double constant) {
  const double D = report.trace_data;
  const double M = std::max(report.bulk_big, D);
  if (M == 0.0) return report.bulk_small == 0.0;
  const double interpolation = D == 0.0 ? 0.0 : std::pow(M, 1.0 - alpha) * std::pow(D, alpha);
  const double correction = constant * std::exp(-constant / report.h) * report.bulk_big;
  return report.bulk_small <= constant * interpolation + correction;
}

BoundaryBulkReport boundary_bulk_probe(const TorusFunction& f, const BoundaryBulkOptions& options) {
  if (!(options.r0 > 0.0)) throw domain_error("boundary_bulk_probe: r0 must be positive");
  if (options.r0 >= 1.0) throw domain_error("boundary_bulk_probe: geometry requires r0 < 1");
  if (options.t_steps < 2) throw precondition_error("boundary_bulk_probe: need at least two height steps");
  if (options.mode == BulkMode::reflected && !(options.horizon > 1.0)) {
    throw precondition_error("boundary_bulk_probe: the reflection horizon must exceed 1");
  }
  constexpr double s = 0.5;
  std::vector<double> heights(options.t_steps + 1);
  for (std::size_t i = 0; i <= options.t_steps; ++i) {
    heights[i] = static_cast<double>(i) / static_cast<double>(options.t_steps);
  }

  const TorusSpectrum c = dft(f);
  const std::vector<double> lambda = torus_eigenvalues(f.N(), f.d());
  const bool reflected = options.mode == BulkMode::reflected;
  const double T = options.horizon;
  auto profile = [&](double root, double t) {
    return extension_profile(s, root * (reflected ? T - t : t));
  };
  std::vector<double> values = assemble_levels(c, lambda, heights, profile);
  TorusSpectrum slope = c;
  for (std::size_t k = 0; k < slope.coeffs.size(); ++k) {
    const double root = std::sqrt(lambda[k]);
    slope.coeffs[k] *= reflected ? root * std::exp(-root * T) : -root;
  }
  TorusFunction base(f.N(), f.d(), std::vector<double>(values.begin(), values.begin() + static_cast<long>(f.size())));
  const ExtensionField field(std::move(base), s, heights, std::move(values), idft(slope));

  const std::vector<double> origin(static_cast<std::size_t>(f.d()), 0.0);
  const HalfBallNorms inner = half_ball_norms(field, origin, options.r0);
  const HalfBallNorms outer = half_ball_norms(field, origin, 1.0);

  BoundaryBulkReport report;
  report.h = f.h();
  report.r0 = options.r0;
  report.bulk_small = inner.bulk_l2;
  report.bulk_big = outer.bulk_l2;
  report.trace_data = outer.trace_h1 + outer.trace_dt_l2;
  const double M = std::max(report.bulk_big, report.trace_data);
  report.degenerate = report.bulk_big <= report.trace_data || report.bulk_small == 0.0;
  if (report.degenerate) {
    report.raw_alpha = std::numeric_limits<double>::quiet_NaN();
    report.fitted_alpha = report.raw_alpha;
  } else {
    report.raw_alpha = std::log(report.bulk_small / M) / std::log(report.trace_data / M);
    constexpr double kEdge = 1e-9;
    report.fitted_alpha = std::clamp(report.raw_alpha, kEdge, 1.0 - kEdge);
  }
  double alpha = options.alpha.value_or(report.fitted_alpha);
  if (std::isnan(alpha)) alpha = 1.0;
  report.holds = boundary_bulk_holds(report, std::clamp(alpha, 0.0, 1.0), options.constant);
  return report;
}

TorusFunction boundary_bulk_sample(long N, std::uint64_t seed) {
  TorusFunction g(N, 1);
  const double h = g.h();
  if (h > 0.1) throw precondition_error("boundary_bulk_sample: needs mesh h <= 0.1");
  std::mt19937_64 rng(seed);
  constexpr double kWidth = 0.25;
  constexpr int kPower = 4;
  for (int bump = 0; bump < 2; ++bump) {
    const double width = std::uniform_real_distribution<double>(0.7 * kWidth, kWidth)(rng);
    const double reach = 0.48 - width - 0.2;
    const double mid = std::uniform_real_distribution<double>(-reach, reach)(rng);
    const double amplitude = std::normal_distribution<double>()(rng);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
      const double z = (static_cast<double>(g.site(flat)[0]) * h - mid) / width;
      if (std::abs(z) < 1.0) g.values()[flat] += amplitude * std::pow(1.0 - z * z, kPower);
    }
  }
  // Two applications of the second difference keep the support within 2h of the bumps.
  for (int pass = 0; pass < 2; ++pass) {
    TorusFunction next(N, 1);
    for (long j = -N; j <= N; ++j) {
      const Site at{j};
      next(at) = (2.0 * g(at) - g(Site{j - 1}) - g(Site{j + 1})) / (h * h);
    }
    g = std::move(next);
  }
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    if (std::abs(static_cast<double>(g.site(flat)[0]) * h) >= 0.5 && g.values()[flat] != 0.0) {
      throw certificate_failure("boundary_bulk_sample: data leaked outside |x| < 1/2");
    }
  }
  return g;
}

}  // namespace fdl
