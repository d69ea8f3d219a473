#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "qsa/error.hpp"

namespace qsa {

namespace detail {

// log(cosh t) for t >= 0 without overflow.
inline double log_cosh(double t) {
  return t + std::log1p(std::exp(-2.0 * t)) - M_LN2;
}

// T_d(x) for |x| <= 1 via the cosine form; callers handle |x| > 1.
inline double cheb_inside(int d, double x) { return std::cos(d * std::acos(x)); }

}  // namespace detail

// Gap filter Upsilon(theta) = T_d(m(cos theta)) / T_d(m(1)) with the affine
// map m(c) = (2c + 1 - cos Delta)/(1 + cos Delta), which sends [-1, cos Delta]
// onto [-1, 1]. Upsilon(0) = 1 exactly and |Upsilon| <= achieved_eps on
// |theta| in [Delta, pi].
struct ChebyshevFilter {
  double Delta = 0.0;
  double eps_target = 0.0;
  int d = 0;
  double achieved_eps = 0.0;
  double m1 = 0.0;  // mapped endpoint (3 - cos Delta)/(1 + cos Delta)

  double eval(double theta) const {
    double x = (2.0 * std::cos(theta) + 1.0 - std::cos(Delta)) / (1.0 + std::cos(Delta));
    double log_denom = detail::log_cosh(d * std::acosh(m1));
    if (x >= 1.0) {
      if (x > m1) x = m1;  // cos rounding can overshoot at theta ~ 0
      return std::exp(detail::log_cosh(d * std::acosh(x)) - log_denom);
    }
    if (x <= -1.0) {
      double mag = std::exp(detail::log_cosh(d * std::acosh(-x)) - log_denom);
      return (d % 2 == 0) ? mag : -mag;
    }
    return detail::cheb_inside(d, x) * std::exp(-log_denom);
  }
};

inline double eval_filter(const ChebyshevFilter& filter, double theta) {
  return filter.eval(theta);
}

// Minimal degree with T_d(m(1)) >= 1/eps; achieved_eps = 1/T_d(m(1)).
inline ChebyshevFilter synthesize_filter(double Delta, double eps) {
  require(Delta > 0.0 && Delta <= M_PI, errc::invalid_parameter, "Delta must be in (0, pi]");
  require(eps > 0.0 && eps < 1.0, errc::invalid_parameter, "eps must be in (0, 1)");
  require(1.0 + std::cos(Delta) > 1e-15, errc::invalid_parameter,
          "Delta too close to pi, gap map degenerates");
  double m1 = (3.0 - std::cos(Delta)) / (1.0 + std::cos(Delta));
  double a = std::acosh(m1);
  double target = std::log(1.0 / eps);
  int d = std::max(1, static_cast<int>(std::ceil(std::acosh(1.0 / eps) / a)));
  while (d > 1 && detail::log_cosh((d - 1) * a) >= target) --d;
  while (detail::log_cosh(d * a) < target) ++d;
  ChebyshevFilter filter;
  filter.Delta = Delta;
  filter.eps_target = eps;
  filter.d = d;
  filter.m1 = m1;
  filter.achieved_eps = std::exp(-detail::log_cosh(d * a));
  return filter;
}

inline std::vector<std::pair<double, int>> filter_degree_curve(double Delta,
                                                               const std::vector<double>& eps_list) {
  std::vector<std::pair<double, int>> out;
  out.reserve(eps_list.size());
  for (double eps : eps_list) out.emplace_back(eps, synthesize_filter(Delta, eps).d);
  return out;
}

}  // namespace qsa
