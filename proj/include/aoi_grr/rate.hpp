#pragma once

// Chernoff rate functions sup_theta { theta*y - coeff*Lambda_v(theta) }.

#include <cmath>
#include <functional>
#include <optional>

#include "aoi_grr/dist.hpp"
#include "aoi_grr/error.hpp"

namespace aoi {

/// Extra restriction on theta. Must be monotone: true on (0, theta_c) and
/// false beyond, which makes bisection for theta_c valid.
using ThetaConstraint = std::function<bool(double)>;

struct RateResult {
  double value = 0.0;
  double theta_star = 0.0;
  bool unbounded = false;
};

struct GoldenOptions {
  double rel_tol = 1e-10;
  int max_iter = 200;
};

/// Maximizes a unimodal function on [lo, hi]. Returns the final bracket midpoint.
template <class F>
double golden_section_max(F&& f, double lo, double hi, GoldenOptions opts = {}) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < opts.max_iter; ++it) {
    if (b - a <= opts.rel_tol * (std::abs(a) + std::abs(b)) * 0.5) break;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

namespace detail {

/// Largest theta (<= cap) at which a monotone constraint still holds.
inline double constraint_edge(const ThetaConstraint& ok, double cap) {
  const double tiny = 1e-12 * (std::isfinite(cap) ? cap : 1.0);
  if (!ok(tiny)) throw Error(ErrorCode::EmptyFeasibleSet, "constraint excludes every theta > 0");
  double lo = tiny, hi;
  if (std::isfinite(cap)) {
    hi = cap * (1.0 - 1e-12);
    if (ok(hi)) return cap;
  } else {
    hi = 1.0;
    while (ok(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12) return kInf;
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace detail

/// sup over theta in (0, theta_max) intersected with the constraint of
/// theta*y - coeff*Lambda_v(theta). Zero (at theta=0) when the objective's
/// slope at the origin is non-positive.
inline RateResult sup_rate(double y, double coeff, const ServiceLaw& law, const ThetaConstraint& constraint = {}) {
  if (!(coeff >= 0.0)) throw Error(ErrorCode::NonPositiveParameter, "coeff must be >= 0");
  double upper = theta_max(law);
  if (constraint) upper = std::min(upper, detail::constraint_edge(constraint, upper));

  const double slope0 = y - coeff * mean(law);
  if (slope0 <= 0.0) return {0.0, 0.0, false};
  if (!std::isfinite(upper)) return {kInf, kInf, true};

  const double lo = 1e-12 * upper;
  const double hi = upper * (1.0 - 1e-12);
  auto objective = [&](double th) { return th * y - coeff * logmgf(law, th); };
  auto slope = [&](double th) { return y - coeff * dlogmgf(law, th); };

  if (coeff == 0.0 || slope(hi) >= 0.0) return {objective(hi), hi, false};

  double th = golden_section_max(objective, lo, hi);
  // The objective is flat at its peak, so comparisons of f stall around
  // sqrt(eps); finish on the sign of the (monotone) derivative.
  double a = th, b = th;
  double step = 1e-6 * upper;
  while (a > lo && slope(a) < 0.0) a = std::max(lo, a - (step *= 2.0));
  step = 1e-6 * upper;
  while (b < hi && slope(b) > 0.0) b = std::min(hi, b + (step *= 2.0));
  if (slope(a) >= 0.0 && slope(b) <= 0.0) {
    for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
      const double mid = 0.5 * (a + b);
      (slope(mid) > 0.0 ? a : b) = mid;
    }
    th = 0.5 * (a + b);
  }
  return {objective(th), th, false};
}

/// Closed form of the exponential-service rate function:
/// sup_theta { theta*y + coeff*log(1 - theta/lambda) }.
inline double exponential_rate_closed_form(double lambda, double coeff, double y) {
  if (lambda * y <= coeff) return 0.0;
  if (coeff == 0.0) return lambda * y;
  return lambda * y - coeff - coeff * std::log(lambda * y / coeff);
}

}  // namespace aoi
