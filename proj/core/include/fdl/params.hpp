#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "fdl/errors.hpp"

namespace fdl {

/// A lattice site in Z^d.
using Site = std::vector<long>;
using SiteView = std::span<const long>;

/// Fractional order, mesh size and dimension of a discrete fractional Laplacian.
class FracParams {
 public:
  FracParams(double s, double h, int d) : s_(s), h_(h), d_(d) {
    if (!(s > 0.0 && s < 1.0)) throw domain_error("FracParams: s must lie in (0,1)");
    if (!(h > 0.0)) throw domain_error("FracParams: h must be positive");
    if (d < 1) throw domain_error("FracParams: d must be at least 1");
  }

  [[nodiscard]] double s() const noexcept { return s_; }
  [[nodiscard]] double h() const noexcept { return h_; }
  [[nodiscard]] int d() const noexcept { return d_; }

  [[nodiscard]] FracParams with_h(double h) const { return {s_, h, d_}; }
  [[nodiscard]] FracParams with_s(double s) const { return {s, h_, d_}; }

 private:
  double s_;
  double h_;
  int d_;
};

[[nodiscard]] inline long l1_norm(SiteView m) {
  long r = 0;
  for (long c : m) r += c < 0 ? -c : c;
  return r;
}

[[nodiscard]] inline long linf_norm(SiteView m) {
  long r = 0;
  for (long c : m) r = std::max(r, c < 0 ? -c : c);
  return r;
}

[[nodiscard]] inline bool is_origin(SiteView m) {
  for (long c : m) {
    if (c != 0) return false;
  }
  return true;
}

}  // namespace fdl
