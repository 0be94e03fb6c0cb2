#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "fdl/errors.hpp"
#include "fdl/kernel.hpp"
#include "fdl/specfun.hpp"
#include "semigroup.hpp"

namespace fdl {

namespace {

using Rule = boost::math::quadrature::gauss<double, 20>;

std::size_t table_size(long radius, int d) {
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(radius + 1);
  return n;
}

void decode(std::size_t flat, long side, Site& m) {
  for (std::size_t k = m.size(); k-- > 0;) {
    m[k] = static_cast<long>(flat % static_cast<std::size_t>(side));
    flat /= static_cast<std::size_t>(side);
  }
}

// All orthant offsets at once: the semigroup integral on Gauss-Legendre panels of unit width
// in log t, one Bessel sequence per node.
std::vector<double> tabulate_semigroup(const FracParams& p, long radius) {
  const int d = p.d();
  const double s = p.s();
  const std::size_t size = table_size(radius, d);
  std::vector<double> acc(size, 0.0);
  const double T = detail::tail_cut(radius);
  const double lo = std::log(detail::kHeadCut);
  const double hi = std::log(T);
  const auto panels = static_cast<long>(std::ceil(hi - lo));
  const double width = (hi - lo) / static_cast<double>(panels);
  const auto& nodes = Rule::abscissa();
  const auto& weights = Rule::weights();
  const long side = radius + 1;
  std::vector<double> partial(static_cast<std::size_t>(d) + 1, 1.0);
  Site m(static_cast<std::size_t>(d), 0);

  auto accumulate = [&](double u, double w) {
    const double t = std::exp(u);
    const std::vector<double> seq = bessel_i_scaled_sequence(radius, 2.0 * t);
    const double factor = w * std::exp(-s * u);
    if (d == 2) {
      for (long a = 0; a < side; ++a) {
        const double fa = factor * seq[static_cast<std::size_t>(a)];
        double* row = acc.data() + static_cast<std::size_t>(a * side);
        for (long b = 0; b < side; ++b) row[b] += fa * seq[static_cast<std::size_t>(b)];
      }
      return;
    }
    for (std::size_t flat = 0; flat < size; ++flat) {
      decode(flat, side, m);
      double prod = factor;
      for (long c : m) prod *= seq[static_cast<std::size_t>(c)];
      acc[flat] += prod;
    }
  };

  for (long k = 0; k < panels; ++k) {
    const double center = lo + (static_cast<double>(k) + 0.5) * width;
    const double half = 0.5 * width;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double w = half * weights[i];
      if (nodes[i] == 0.0) {
        accumulate(center, w);
      } else {
        accumulate(center - half * nodes[i], w);
        accumulate(center + half * nodes[i], w);
      }
    }
  }

  const double scale = detail::semigroup_scale(s, p.h());
  for (std::size_t flat = 0; flat < size; ++flat) {
    decode(flat, side, m);
    if (is_origin(m)) {
      acc[flat] = 0.0;
      continue;
    }
    acc[flat] = scale * (acc[flat] + detail::semigroup_head(m, s) + detail::semigroup_tail(m, s, T));
  }
  return acc;
}

}  // namespace

KernelTable::KernelTable(const FracParams& p, long radius) : params_(p), radius_(radius) {
  if (radius < 0) throw precondition_error("KernelTable: radius must be nonnegative");
  if (p.d() == 1) {
    values_.resize(static_cast<std::size_t>(radius) + 1);
    for (long m = 0; m <= radius; ++m) values_[static_cast<std::size_t>(m)] = kernel_1d(p, m);
    tail_constant_ = kernel_constant_1d(p);
  } else {
    values_ = tabulate_semigroup(p, radius);
    tail_constant_ = kernel_upper_bound(p, 1) / gamma_ratio(1.0 - p.s(), 1.0 + p.d() + p.s());
  }
}

std::size_t KernelTable::flat_index(SiteView m) const {
  if (static_cast<int>(m.size()) != params_.d()) {
    throw precondition_error("KernelTable: offset dimension does not match d");
  }
  std::size_t flat = 0;
  for (long c : m) {
    const long a = c < 0 ? -c : c;
    if (a > radius_) {
      throw precondition_error("KernelTable: offset outside the cached radius " +
                               std::to_string(radius_));
    }
    flat = flat * static_cast<std::size_t>(radius_ + 1) + static_cast<std::size_t>(a);
  }
  return flat;
}

double KernelTable::operator()(SiteView m) const { return values_[flat_index(m)]; }

double KernelTable::at1(long m) const {
  const long buf[1] = {m};
  return (*this)(SiteView(buf, 1));
}

double KernelTable::at2(long m1, long m2) const {
  const long buf[2] = {m1, m2};
  return (*this)(SiteView(buf, 2));
}

}  // namespace fdl
