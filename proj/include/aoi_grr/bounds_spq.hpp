#pragma once

// Upper bound on Pr(A_{g,i}(k) >= n x) under the single packet queue. It
// rests on A_{g,i}(k) < d_g n b + T_{g,i}(k-1) + V_{g,i}(k). No lower bound
// is offered for this discipline.

#include <cstdint>

#include "aoi_grr/bounds_ipq.hpp"
#include "aoi_grr/rate.hpp"
#include "aoi_grr/schedule.hpp"

namespace aoi {

struct SpqBoundQuery {
  SourceId source;
  std::int64_t k = 2;  // needs a predecessor update
  double x = 0.0;
};

inline void check_query(const SystemSpec& spec, const SpqBoundQuery& q) {
  check_source(spec, q.source);
  if (q.k < 2) throw Error(ErrorCode::KTooSmall, "SPQ bounds need k >= 2");
}

inline BoundReport theorem3_upper(const SystemSpec& spec, const IterationSchedule& sched, const SpqBoundQuery& q) {
  check_query(spec, q);
  const auto n = spec.scale_n();
  const double d_g = static_cast<double>(spec.group(q.source.g).d);
  const double own = spec.is_virtual(q.source) ? 0.0 : 1.0 / static_cast<double>(n);
  const auto r = sup_rate(q.x - d_g * spec.b, t_ratio(spec, sched, q.source, q.k) + own, spec.service);
  BoundReport rep;
  rep.exponent = r.value;
  rep.theta_star = r.theta_star;
  rep.prefactor = 1.0;
  rep.n = n;
  rep.gammas = {r.value};
  rep.probability = clamp_probability(1.0, static_cast<double>(n), r.value);
  rep.below_floor = q.x <= d_g * spec.b;
  return rep;
}

/// Many-source limit: the source's own service (1/n) drops out; t is already
/// a ratio of whole-group counts.
inline double corollary6_asymptotic(const SystemSpec& spec, const IterationSchedule& sched, const SpqBoundQuery& q) {
  check_query(spec, q);
  const double d_g = static_cast<double>(spec.group(q.source.g).d);
  return sup_rate(q.x - d_g * spec.b, t_ratio(spec, sched, q.source, q.k), spec.service).value;
}

/// Sum of the asymptotic exponents over the d~/d_g phases of t_{g,i}(k-1).
/// Phase zeta uses k = zeta + 1.
inline double corollary7_longrun(const SystemSpec& spec, const IterationSchedule& sched, SourceId s, double x) {
  check_source(spec, s);
  const std::int64_t phases = sched.d_tilde / spec.group(s.g).d;
  double total = 0.0;
  for (std::int64_t zeta = 1; zeta <= phases; ++zeta)
    total += corollary6_asymptotic(spec, sched, SpqBoundQuery{s, zeta + 1, x});
  return total;
}

/// Exponential-service approximations of the asymptotic SPQ exponent with
/// theta* = lambda - t/x substituted (see approx_exponents_ipq for regimes).
inline double approx_exponents_spq(const SystemSpec& spec, const IterationSchedule& sched, const SpqBoundQuery& q,
                                   Regime regime) {
  const auto* expo = std::get_if<Exponential>(&spec.service);
  if (!expo) throw Error(ErrorCode::WrongLaw, "closed forms need exponential service");
  check_query(spec, q);
  const double lambda = expo->rate;
  const double b = spec.b;
  const double x = q.x;
  const double dg = static_cast<double>(spec.group(q.source.g).d);
  const double t = t_ratio(spec, sched, q.source, q.k);
  const double tail = t + t * std::log(lambda * x / t);
  switch (regime) {
    case Regime::PlugIn: return lambda * x - dg * (lambda * b - t / x * b) - tail;
    case Regime::LargeRate: return lambda * x - dg * lambda * b - tail;
    case Regime::SmallRate: return lambda * x - dg * (1.0 - t / x * b) - tail;
  }
  return 0.0;
}

}  // namespace aoi
