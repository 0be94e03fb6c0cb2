#pragma once

// Pieces of the heat-semigroup representation shared by the pointwise and tabulated kernels.

#include <vector>

#include "fdl/params.hpp"

namespace fdl::detail {

/// Cut between the analytic small-t head and the numerical middle of the semigroup integral.
inline constexpr double kHeadCut = 1e-12;

/// Start of the large-t asymptotic tail for offsets whose largest component is `max_abs`.
double tail_cut(long max_abs);

/// int_0^{kHeadCut} prod_i e^{-2t} I_{m_i}(2t) t^{-1-s} dt from the small-t expansion.
double semigroup_head(SiteView m, double s);

/// int_T^inf prod_i e^{-2t} I_{m_i}(2t) t^{-1-s} dt from the product of Hankel expansions.
double semigroup_tail(SiteView m, double s, double T);

/// h^{-2s} / |Gamma(-s)|.
double semigroup_scale(double s, double h);

}  // namespace fdl::detail
