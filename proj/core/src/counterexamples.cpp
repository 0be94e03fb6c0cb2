#include "fdl/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <tuple>

#include "fdl/errors.hpp"
#include "fdl/kernel.hpp"

namespace fdl {

namespace {

Site difference(SiteView a, SiteView b) {
  Site out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

void require_points(const std::vector<Site>& sites, int d, const char* who) {
  for (const Site& s : sites) {
    if (static_cast<int>(s.size()) != d) {
      throw precondition_error(std::string(who) + ": point dimension does not match d");
    }
  }
}

void require_disjoint(const std::vector<Site>& X, const std::vector<Site>& Y) {
  const std::set<Site> xs(X.begin(), X.end());
  for (const Site& y : Y) {
    if (xs.count(y) != 0) throw precondition_error("counterexample: X and Y must be disjoint");
  }
  if (xs.size() != X.size()) throw precondition_error("counterexample: X has repeated points");
}

}  // namespace

std::vector<Site> nearest_complement(const std::vector<Site>& X, std::size_t count, int d,
                                     std::optional<long> box) {
  if (X.empty()) throw precondition_error("nearest_complement: X must be nonempty");
  require_points(X, d, "nearest_complement");
  std::vector<double> centroid(static_cast<std::size_t>(d), 0.0);
  for (const Site& x : X) {
    for (std::size_t k = 0; k < x.size(); ++k) centroid[k] += static_cast<double>(x[k]);
  }
  for (double& c : centroid) c /= static_cast<double>(X.size());
  const std::set<Site> excluded(X.begin(), X.end());
  auto distance = [&](const Site& j) {
    double r = 0.0;
    for (std::size_t k = 0; k < j.size(); ++k) r = std::max(r, std::abs(static_cast<double>(j[k]) - centroid[k]));
    return r;
  };
  for (long half = 2;; half *= 2) {
    std::vector<std::pair<double, Site>> candidates;
    Site j(static_cast<std::size_t>(d));
    Site lo(static_cast<std::size_t>(d));
    for (std::size_t k = 0; k < j.size(); ++k) lo[k] = static_cast<long>(std::floor(centroid[k])) - half;
    j = lo;
    while (true) {
      const bool inside = !box || linf_norm(j) <= *box;
      if (inside && excluded.count(j) == 0) candidates.emplace_back(distance(j), j);
      std::size_t axis = j.size();
      while (axis-- > 0) {
        if (++j[axis] <= lo[axis] + 2 * half + 1) break;
        j[axis] = lo[axis];
      }
      if (axis == static_cast<std::size_t>(-1)) break;
    }
    std::sort(candidates.begin(), candidates.end());
    // Every point within distance half - 1 of the centroid lies in the scanned box.
    if (candidates.size() >= count && candidates[count - 1].first <= static_cast<double>(half - 1)) {
      std::vector<Site> out;
      for (std::size_t i = 0; i < count; ++i) out.push_back(candidates[i].second);
      return out;
    }
    if (box && half > 4 * (*box + 2)) {
      throw precondition_error("nearest_complement: not enough free points in the box");
    }
  }
}

Eigen::MatrixXd kernel_matrix(const FracParams& p, const std::vector<Site>& X,
                              const std::vector<Site>& Y) {
  Eigen::MatrixXd M(static_cast<Eigen::Index>(X.size()), static_cast<Eigen::Index>(Y.size()));
  for (std::size_t a = 0; a < X.size(); ++a) {
    for (std::size_t b = 0; b < Y.size(); ++b) {
      const Site diff = difference(X[a], Y[b]);
      double value = 0.0;
      if (!is_origin(diff)) {
        value = p.d() == 1 ? kernel_1d(p, diff[0]) : kernel_nd(p, diff, 1e-12).value;
      }
      M(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = value;
    }
  }
  return M;
}

NullVector null_vector(const Eigen::MatrixXd& M) {
  if (M.cols() <= M.rows()) throw precondition_error("null_vector: matrix must have more columns than rows");
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(M);
  const Eigen::Index rank = cod.rank();
  // M P = Q [T 0; 0 0] Z, so the trailing rows of Z span the null space after permutation.
  const Eigen::MatrixXd Z = cod.matrixZ();
  Eigen::VectorXd basis = Z.row(rank).transpose();
  Eigen::VectorXd v = cod.colsPermutation() * basis;
  const double sup = v.cwiseAbs().maxCoeff();
  v /= sup;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-14) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  return {v, M.cols() - rank};
}

LatticeCounterexample global_ucp_counterexample(const FracParams& p, const std::vector<Site>& X,
                                                std::optional<std::vector<Site>> Y, double tol) {
  if (X.empty()) throw precondition_error("global_ucp_counterexample: X must be nonempty");
  require_points(X, p.d(), "global_ucp_counterexample");
  std::vector<Site> support = Y ? *Y : nearest_complement(X, X.size() + 1, p.d());
  require_points(support, p.d(), "global_ucp_counterexample");
  if (support.size() != X.size() + 1) {
    throw precondition_error("global_ucp_counterexample: Y must have |X| + 1 points");
  }
  require_disjoint(X, support);

  const NullVector nv = null_vector(kernel_matrix(p, X, support));
  FinitelySupported shape;
  for (std::size_t b = 0; b < support.size(); ++b) {
    shape.support[support[b]] = nv.vector(static_cast<Eigen::Index>(b));
  }
  LatticeFunction u(p, std::move(shape));

  // Re-verify through the operator rather than the matrix.
  long radius = 1;
  for (const Site& x : X) {
    for (const Site& y : support) radius = std::max(radius, linf_norm(difference(x, y)));
  }
  const LatticeOperator op(p, radius);
  Certificate cert(p);
  cert.constrained = X;
  cert.support = support;
  cert.tolerance = tol;
  cert.u_norm = u.sup_norm();
  cert.multiple_solutions = nv.corank > 1;
  cert.claim = "global unique continuation fails: u = 0 and (-Delta)^s u = 0 on X, u != 0";
  for (const Site& x : X) cert.residual_sup = std::max(cert.residual_sup, std::abs(op.apply(u, x).value));
  cert.accepted = cert.residual_sup <= tol * cert.u_norm;
  if (!cert.accepted) {
    throw certificate_failure("global_ucp_counterexample: residual " + std::to_string(cert.residual_sup) +
                              " exceeds tolerance");
  }
  return {std::move(u), std::move(cert)};
}

double slab_coefficient(const FracParams& p) {
  const FracParams p1(p.s(), p.h(), 1);
  const double k1 = kernel_1d(p1, 1);
  const double k2 = kernel_1d(p1, 2);
  const double k3 = kernel_1d(p1, 3);
  const double a = (k1 + k2) / (k3 - k1);
  if (a == -1.0) throw certificate_failure("slab_coefficient: a = -1 would cancel u at +-2");
  return a;
}

LatticeFunction slab_profile(const FracParams& p, bool corrected) {
  StepProfile step;
  step.axis = 0;
  step.cutoff = 2;
  step.left = -1.0;
  step.right = 1.0;
  if (corrected) {
    const double a = slab_coefficient(p);
    step.axial[2] = a;
    step.axial[-2] = -a;
  }
  return {p, std::move(step)};
}

SlabCounterexample slab_counterexample_1d(const FracParams& p, long window, double tol) {
  if (p.d() != 1) throw precondition_error("slab_counterexample_1d: d must be 1");
  const double a = slab_coefficient(p);
  LatticeFunction u = slab_profile(p);
  const LatticeOperator op(p, std::max(window, 8L) + 4);

  FinitelySupported potential;
  double potential_sup = 0.0;
  for (long j = -window; j <= window; ++j) {
    const Site site{j};
    const double uj = u(site);
    if (uj == 0.0) continue;
    const double v = op.apply(u, site).value / uj;
    potential.support[site] = v;
    potential_sup = std::max(potential_sup, std::abs(v));
  }

  Certificate cert(p);
  cert.tolerance = tol;
  cert.u_norm = u.sup_norm();
  cert.potential_bound = potential_sup;
  cert.claim = "weak unique continuation from the slab {-1,0,1} fails: u = 0 and (-Delta)^s u = V u there";
  for (long j = -1; j <= 1; ++j) {
    cert.constrained.push_back(Site{j});
    cert.residual_sup = std::max(cert.residual_sup, std::abs(op.apply(u, Site{j}).value));
  }
  cert.support = {Site{-2}, Site{2}};
  cert.accepted = cert.residual_sup <= tol;
  if (!cert.accepted) throw certificate_failure("slab_counterexample_1d: residual exceeds tolerance");
  return {std::move(u), LatticeFunction(p, std::move(potential)), a, std::move(cert)};
}

Slab2dReport slab_counterexample_2d(const FracParams& p, std::span<const long> j2_samples,
                                    long trunc_radius, double tol, bool corrected) {
  if (p.d() != 2) throw precondition_error("slab_counterexample_2d: d must be 2");
  if (j2_samples.empty()) throw precondition_error("slab_counterexample_2d: need at least one j2");
  const LatticeFunction u = slab_profile(p, corrected);
  const LatticeOperator op(p, trunc_radius);
  Slab2dReport report{{}, 2.0 * u.sup_norm() * op.truncation_tail(), 0.0, Certificate(p)};
  if (report.tail_bound > tol) {
    throw tolerance_failure("slab_counterexample_2d: truncation tail exceeds tolerance", report.tail_bound, tol);
  }
  // One-dimensional prediction: the kernel's marginal along the first axis is the 1D kernel.
  const FracParams p1(p.s(), p.h(), 1);
  const double k1 = kernel_1d(p1, 1);
  const double k2 = kernel_1d(p1, 2);
  const double k3 = kernel_1d(p1, 3);
  const double a = corrected ? slab_coefficient(p) : 0.0;
  const double edge = -k1 - k2 + a * (k3 - k1);

  Certificate& cert = report.certificate;
  cert.tolerance = tol;
  cert.u_norm = u.sup_norm();
  cert.claim = "the slab counterexample lifts to d = 2 unchanged in j2";
  for (long j1 = -1; j1 <= 1; ++j1) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (long j2 : j2_samples) {
      const Site site{j1, j2};
      const ApplyResult r = op.apply(u, site);
      const double prediction = j1 == 0 ? 0.0 : (j1 > 0 ? edge : -edge);
      report.samples.push_back({j1, j2, r.value, prediction});
      cert.constrained.push_back(site);
      cert.residual_sup = std::max(cert.residual_sup, std::abs(r.value - prediction));
      lo = std::min(lo, r.value);
      hi = std::max(hi, r.value);
    }
    report.spread = std::max(report.spread, hi - lo);
  }
  cert.accepted = cert.residual_sup <= tol;
  return report;
}

TorusCounterexample torus_ucp_counterexample(long N, int d, double s, const std::vector<Site>& X,
                                             double tol) {
  if (X.empty()) throw precondition_error("torus_ucp_counterexample: X must be nonempty");
  if (static_cast<long>(X.size()) > N) {
    throw precondition_error("torus_ucp_counterexample: the construction needs |X| <= N");
  }
  require_points(X, d, "torus_ucp_counterexample");
  for (const Site& x : X) {
    if (linf_norm(x) > N) throw precondition_error("torus_ucp_counterexample: X must lie in {-N..N}^d");
  }
  const std::vector<Site> support = nearest_complement(X, X.size() + 1, d, N);
  const FracParams p(s, torus_mesh(N), d);

  // Matrix from the heat-integral kernel, verification through the tabulated pointwise operator.
  Eigen::MatrixXd M(static_cast<Eigen::Index>(X.size()), static_cast<Eigen::Index>(support.size()));
  for (std::size_t a = 0; a < X.size(); ++a) {
    for (std::size_t b = 0; b < support.size(); ++b) {
      M(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          torus_kernel_heat_integral(p, N, difference(X[a], support[b]), 1e-13);
    }
  }
  const NullVector nv = null_vector(M);
  TorusFunction u(N, d);
  for (std::size_t b = 0; b < support.size(); ++b) u(support[b]) = nv.vector(static_cast<Eigen::Index>(b));

  const TorusFunction image = apply_frac_torus_pointwise(u, s);
  Certificate cert(p);
  cert.constrained = X;
  cert.support = support;
  cert.tolerance = tol;
  cert.multiple_solutions = nv.corank > 1;
  cert.claim = "unique continuation fails on the discrete torus for |X| <= N";
  for (double v : u.values()) cert.u_norm = std::max(cert.u_norm, std::abs(v));
  for (const Site& x : X) cert.residual_sup = std::max(cert.residual_sup, std::abs(image(x)));
  cert.accepted = cert.residual_sup <= tol * cert.u_norm;
  if (!cert.accepted) throw certificate_failure("torus_ucp_counterexample: residual exceeds tolerance");
  return {std::move(u), std::move(cert)};
}

std::vector<double> potential_from_pair(std::span<const double> u, std::span<const double> Lu,
                                        double tol) {
  if (u.size() != Lu.size()) throw precondition_error("potential_from_pair: length mismatch");
  std::vector<double> V(u.size(), 0.0);
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j] != 0.0) {
      V[j] = Lu[j] / u[j];
    } else if (std::abs(Lu[j]) > tol) {
      throw inconsistency_error("potential_from_pair: u vanishes but Lu does not at index " +
                                std::to_string(j));
    }
  }
  return V;
}

}  // namespace fdl
