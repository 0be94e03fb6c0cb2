#include "fdl/carleman.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "fdl/errors.hpp"

namespace fdl {

namespace {

double value_at(const SparseValues& v, const Site& j) {
  const auto it = v.find(j);
  return it == v.end() ? 0.0 : it->second;
}

// The support of v together with its nearest neighbours.
std::set<Site> closed_neighbourhood(const SparseValues& v) {
  std::set<Site> sites;
  for (const auto& [j, value] : v) {
    sites.insert(j);
    Site nb = j;
    for (std::size_t k = 0; k < j.size(); ++k) {
      nb[k] = j[k] + 1;
      sites.insert(nb);
      nb[k] = j[k] - 1;
      sites.insert(nb);
      nb[k] = j[k];
    }
  }
  return sites;
}

}  // namespace

double carleman_weight(double c0, double h, SiteView j, double t) {
  double r2 = 0.0;
  for (long c : j) r2 += static_cast<double>(c) * static_cast<double>(c);
  return -h * h * r2 + c0 * (0.5 * t * t - t);
}

CarlemanConfig::CarlemanConfig(double c0_, double tau_, double h_, double delta0_, double tau0_,
                               std::optional<double> t_step_)
    : c0(c0_), tau(tau_), h(h_), delta0(delta0_), tau0(tau0_), t_step(t_step_.value_or(h_ / 4.0)) {
  if (!(c0 > 0.0)) throw domain_error("CarlemanConfig: c0 must be positive");
  if (!(tau >= 0.0)) throw domain_error("CarlemanConfig: tau must be nonnegative");
  if (!(h > 0.0)) throw domain_error("CarlemanConfig: h must be positive");
  if (!(delta0 > 0.0 && tau0 > 0.0 && t_step > 0.0)) {
    throw domain_error("CarlemanConfig: delta0, tau0 and t_step must be positive");
  }
  if (tau * h > delta0) throw precondition_error("CarlemanConfig: tau * h exceeds delta0");
}

Conjugates tangential_conjugates(const CarlemanConfig& cfg, const SparseValues& v) {
  const double h2 = cfg.h * cfg.h;
  Conjugates out;
  for (const Site& j : closed_neighbourhood(v)) {
    double sym = 0.0;
    double anti = 0.0;
    Site nb = j;
    const double vj = value_at(v, j);
    for (std::size_t k = 0; k < j.size(); ++k) {
      const auto jk = static_cast<double>(j[k]);
      // phi_j - phi_{j +- e_k} = h^2 (1 +- 2 j_k)
      const double up = cfg.tau * h2 * (1.0 + 2.0 * jk);
      const double down = cfg.tau * h2 * (1.0 - 2.0 * jk);
      nb[k] = j[k] + 1;
      const double v_up = value_at(v, nb);
      nb[k] = j[k] - 1;
      const double v_down = value_at(v, nb);
      nb[k] = j[k];
      sym += std::cosh(up) * v_up + std::cosh(down) * v_down - 2.0 * vj;
      anti += std::sinh(up) * v_up + std::sinh(down) * v_down;
    }
    out.symmetric.emplace(j, sym / h2);
    out.antisymmetric.emplace(j, anti / h2);
  }
  return out;
}

SparseValues conjugated_laplacian(const CarlemanConfig& cfg, const SparseValues& v) {
  auto damp = [&](const Site& j) { return std::exp(-cfg.tau * carleman_weight(cfg.c0, cfg.h, j, 0.0)); };
  SparseValues damped;
  for (const auto& [j, value] : v) damped.emplace(j, damp(j) * value);
  SparseValues out;
  for (const Site& j : closed_neighbourhood(v)) {
    double lap = 0.0;
    Site nb = j;
    for (std::size_t k = 0; k < j.size(); ++k) {
      nb[k] = j[k] + 1;
      lap += value_at(damped, nb);
      nb[k] = j[k] - 1;
      lap += value_at(damped, nb);
      nb[k] = j[k];
      lap -= 2.0 * value_at(damped, j);
    }
    out.emplace(j, lap / (cfg.h * cfg.h) / damp(j));
  }
  return out;
}

double inner_product(const SparseValues& a, const SparseValues& b) {
  double sum = 0.0;
  for (const auto& [j, value] : a) sum += value * value_at(b, j);
  return sum;
}

CommutatorCheck tangential_commutator_check(const CarlemanConfig& cfg, const SparseValues& v) {
  const Conjugates first = tangential_conjugates(cfg, v);
  const SparseValues sa = tangential_conjugates(cfg, first.antisymmetric).symmetric;
  const SparseValues as = tangential_conjugates(cfg, first.symmetric).antisymmetric;

  CommutatorCheck check;
  check.lhs = inner_product(sa, v) - inner_product(as, v);

  const double h = cfg.h;
  const double h2 = h * h;
  const double front = std::sinh(2.0 * cfg.tau * h2);
  double potential = 0.0;
  double gradient = 0.0;
  for (const Site& j : closed_neighbourhood(v)) {
    const double vj = value_at(v, j);
    Site nb = j;
    for (std::size_t k = 0; k < j.size(); ++k) {
      const double sh = std::sinh(2.0 * cfg.tau * static_cast<double>(j[k]) * h2);
      potential += sh * sh * vj * vj;
      nb[k] = j[k] + 1;
      const double up = value_at(v, nb);
      nb[k] = j[k] - 1;
      const double down = value_at(v, nb);
      nb[k] = j[k];
      const double diff = (up - down) / (2.0 * h);
      gradient += diff * diff;
    }
  }
  check.rhs = -4.0 * front * potential / (h2 * h2) - 4.0 * front * gradient / h2;
  check.defect = std::abs(check.lhs - check.rhs);
  return check;
}

CarlemanReport carleman_probe(const CarlemanConfig& cfg, int d, const HalfSpaceField& field) {
  if (d < 1) throw precondition_error("carleman_probe: d must be at least 1");
  if (!(cfg.tau > cfg.tau0)) throw precondition_error("carleman_probe: tau must exceed tau0");
  if (cfg.tau * cfg.h > cfg.delta0) throw precondition_error("carleman_probe: tau * h exceeds delta0");
  constexpr double kSupport = 0.8;
  const double h = cfg.h;
  const double dt = cfg.t_step;
  const long J = static_cast<long>(std::ceil(kSupport / h)) + 2;
  const long side = 2 * J + 1;
  const auto levels = static_cast<std::size_t>(std::ceil(kSupport / dt)) + 3;
  std::size_t columns = 1;
  for (int k = 0; k < d; ++k) columns *= static_cast<std::size_t>(side);

  // Column-major in t: u[i * columns + c]
  std::vector<double> u(levels * columns);
  std::vector<double> weight(levels * columns);
  std::vector<Site> sites(columns, Site(static_cast<std::size_t>(d)));
  std::vector<double> x(static_cast<std::size_t>(d));
  for (std::size_t c = 0; c < columns; ++c) {
    std::size_t rest = c;
    for (int k = d - 1; k >= 0; --k) {
      sites[c][static_cast<std::size_t>(k)] = static_cast<long>(rest % static_cast<std::size_t>(side)) - J;
      rest /= static_cast<std::size_t>(side);
    }
  }
  for (std::size_t i = 0; i < levels; ++i) {
    const double t = static_cast<double>(i) * dt;
    for (std::size_t c = 0; c < columns; ++c) {
      double r2 = t * t;
      for (int k = 0; k < d; ++k) {
        x[static_cast<std::size_t>(k)] = static_cast<double>(sites[c][static_cast<std::size_t>(k)]) * h;
        r2 += x[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
      }
      const double value = field(x, t);
      if (value != 0.0 && r2 >= kSupport * kSupport) {
        throw precondition_error("carleman_probe: field is not supported in the half ball of radius 4/5");
      }
      u[i * columns + c] = value;
      weight[i * columns + c] = std::exp(cfg.tau * carleman_weight(cfg.c0, h, sites[c], t));
    }
  }

  std::vector<std::size_t> stride(static_cast<std::size_t>(d));
  std::size_t st = 1;
  for (int k = d - 1; k >= 0; --k) {
    stride[static_cast<std::size_t>(k)] = st;
    st *= static_cast<std::size_t>(side);
  }
  auto at = [&](std::size_t i, std::size_t c, int k, int step) {
    const long coord = sites[c][static_cast<std::size_t>(k)] + step;
    if (coord < -J || coord > J) return 0.0;
    const std::size_t nb = step > 0 ? c + stride[static_cast<std::size_t>(k)] : c - stride[static_cast<std::size_t>(k)];
    return u[i * columns + nb];
  };
  auto d_t = [&](std::size_t i, std::size_t c) {
    if (i == 0) return (-3.0 * u[c] + 4.0 * u[columns + c] - u[2 * columns + c]) / (2.0 * dt);
    if (i + 1 == levels) return (u[i * columns + c] - u[(i - 1) * columns + c]) / dt;
    return (u[(i + 1) * columns + c] - u[(i - 1) * columns + c]) / (2.0 * dt);
  };
  auto d_tt = [&](std::size_t i, std::size_t c) {
    if (i == 0) {
      return (2.0 * u[c] - 5.0 * u[columns + c] + 4.0 * u[2 * columns + c] - u[3 * columns + c]) / (dt * dt);
    }
    if (i + 1 == levels) return 0.0;
    return (u[(i + 1) * columns + c] - 2.0 * u[i * columns + c] + u[(i - 1) * columns + c]) / (dt * dt);
  };

  const double cell = std::pow(h, d);
  double mass = 0.0;
  double grad = 0.0;
  double normal = 0.0;
  double source = 0.0;
  double boundary = 0.0;
  for (std::size_t i = 0; i < levels; ++i) {
    const double trap = (i == 0 || i + 1 == levels) ? 0.5 * dt : dt;
    for (std::size_t c = 0; c < columns; ++c) {
      const double w = weight[i * columns + c];
      const double value = u[i * columns + c];
      double grad2 = 0.0;
      double lap = 0.0;
      for (int k = 0; k < d; ++k) {
        const double up = at(i, c, k, 1);
        const double down = at(i, c, k, -1);
        const double g = (up - down) / (2.0 * h);
        grad2 += g * g;
        lap += (up + down - 2.0 * value) / (h * h);
      }
      const double ut = d_t(i, c);
      const double op = lap + d_tt(i, c);
      mass += trap * cell * w * w * value * value;
      grad += trap * cell * w * w * grad2;
      normal += trap * cell * w * w * ut * ut;
      source += trap * cell * w * w * op * op;
      if (i == 0) {
        const double b = std::abs(value) + std::sqrt(grad2) + std::abs(ut);
        boundary += cell * w * w * b * b;
      }
    }
  }
  const double tau = cfg.tau;
  CarlemanReport report;
  report.lhs = std::pow(tau, 1.5) * std::sqrt(mass) + std::sqrt(tau) * (std::sqrt(grad) + std::sqrt(normal));
  report.rhs = std::sqrt(source) + std::pow(tau, 1.5) * std::sqrt(boundary);
  if (report.lhs == 0.0) {
    report.empirical_constant = 0.0;
  } else if (report.rhs == 0.0) {
    report.empirical_constant = std::numeric_limits<double>::infinity();
  } else {
    report.empirical_constant = report.lhs / report.rhs;
  }
  return report;
}

HalfSpaceField carleman_bump(std::span<const double> center, double radius, double amplitude) {
  if (!(radius > 0.0)) throw precondition_error("carleman_bump: radius must be positive");
  std::vector<double> c(center.begin(), center.end());
  return [c, radius, amplitude](std::span<const double> x, double t) {
    if (x.size() + 1 != c.size()) throw precondition_error("carleman_bump: center has the wrong dimension");
    double r2 = (t - c.back()) * (t - c.back());
    for (std::size_t k = 0; k < x.size(); ++k) r2 += (x[k] - c[k]) * (x[k] - c[k]);
    const double z = r2 / (radius * radius);
    return z < 1.0 ? amplitude * std::pow(1.0 - z, 4) : 0.0;
  };
}

}  // namespace fdl
