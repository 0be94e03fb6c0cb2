#pragma once

#include <functional>
#include <optional>
#include <span>

#include "fdl/lattice.hpp"

namespace fdl {

/// phi(jh, t) = -|jh|^2 + c0 (t^2/2 - t).
double carleman_weight(double c0, double h, SiteView j, double t);

struct CarlemanConfig {
  CarlemanConfig(double c0, double tau, double h, double delta0 = 0.5, double tau0 = 1.0,
                 std::optional<double> t_step = std::nullopt);

  double c0;
  double tau;
  double h;
  double delta0;
  double tau0;
  double t_step;  // defaults to h/4
};

struct Conjugates {
  SparseValues symmetric;
  SparseValues antisymmetric;
};

/// Symmetric and antisymmetric parts of e^{tau phi} Delta_d e^{-tau phi} applied to v, with the
/// weight differences taken from the quadratic weight itself.
Conjugates tangential_conjugates(const CarlemanConfig& cfg, const SparseValues& v);

/// e^{tau phi} Delta_d (e^{-tau phi} v), evaluated directly.
SparseValues conjugated_laplacian(const CarlemanConfig& cfg, const SparseValues& v);

double inner_product(const SparseValues& a, const SparseValues& b);

struct CommutatorCheck {
  double lhs = 0.0;     // ([S, A] v, v) by composition
  double rhs = 0.0;     // closed-form sums
  double defect = 0.0;  // |lhs - rhs|
};

CommutatorCheck tangential_commutator_check(const CarlemanConfig& cfg, const SparseValues& v);

/// A real function of (x, t) with x in R^d.
using HalfSpaceField = std::function<double(std::span<const double>, double)>;

struct CarlemanReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double empirical_constant = 0.0;  // lhs / rhs, 0 for a vanishing field
};

/// Samples `field` on (hZ)^d x {0, t_step, ...} and evaluates both sides of the weighted estimate
/// with central differences. The field must vanish outside the half ball of radius 4/5.
CarlemanReport carleman_probe(const CarlemanConfig& cfg, int d, const HalfSpaceField& field);

/// Smooth bump (1 - |(x, t) - center|^2 / r^2)^4 cut off at radius r.
HalfSpaceField carleman_bump(std::span<const double> center, double radius, double amplitude = 1.0);

}  // namespace fdl
