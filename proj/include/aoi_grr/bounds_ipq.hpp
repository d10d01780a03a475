#pragma once

// Upper and lower bounds on Pr(A_{g,i}(k) >= n x) under the infinite packet
// queue (per-source FCFS), their n -> infinity limits, the long-run
// violation fraction, the single-group specialization and the
// exponential-service closed forms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aoi_grr/dist.hpp"
#include "aoi_grr/error.hpp"
#include "aoi_grr/model.hpp"
#include "aoi_grr/rate.hpp"
#include "aoi_grr/schedule.hpp"

namespace aoi {

struct BoundReport {
  double exponent = 0.0;    // min over ell' of gamma (plus epsilon for the lower bound)
  double prefactor = 1.0;
  double probability = 1.0;  // prefactor * exp(-n * exponent), clamped to [0, 1]
  std::int64_t argmin_ell = 0;
  double theta_star = 0.0;
  std::int64_t n = 1;
  bool below_floor = false;  // x <= d_g * b: the threshold is never beaten
  std::vector<double> gammas;  // gamma^{(ell')} for ell' = 0, 1, ...
};

inline double clamp_probability(double prefactor, double n, double exponent) {
  if (exponent == kInf) return 0.0;
  const double p = prefactor * std::exp(-n * exponent);
  return std::clamp(p, 0.0, 1.0);
}

/// Largest ell' scanned when minimizing over whole iterations.
inline constexpr std::int64_t kEllCap = 64;

/// Per-iteration stability: some theta > 0 with
/// sum_j (d~/d_j) alpha_j Lambda_v(theta) < d~ theta b. By convexity of
/// Lambda_v this holds iff the mean iteration workload fits the iteration.
inline bool ipq_stable(const SystemSpec& spec, const IterationSchedule& sched) {
  return iteration_load_ratio(spec, sched) * mean(spec.service) < static_cast<double>(sched.d_tilde) * spec.b;
}

/// Edge of the stability region (0, theta_c); EmptyFeasibleSet when unstable.
inline double stability_edge(const SystemSpec& spec, const IterationSchedule& sched) {
  const double load = iteration_load_ratio(spec, sched);
  const double span = static_cast<double>(sched.d_tilde) * spec.b;
  const ServiceLaw law = spec.service;
  return detail::constraint_edge(
      [&](double th) { return load * logmgf(law, th) - span * th < 0.0; }, theta_max(law));
}

inline void require_stable(const SystemSpec& spec, const IterationSchedule& sched) {
  if (!ipq_stable(spec, sched))
    throw Error(ErrorCode::StabilityViolated,
                "mean iteration workload " + std::to_string(iteration_load_ratio(spec, sched) * mean(spec.service)) +
                    " >= iteration length " + std::to_string(static_cast<double>(sched.d_tilde) * spec.b) +
                    " (per unit n)");
}

namespace detail {

struct GammaScan {
  std::vector<double> gammas;
  std::vector<double> thetas;
  std::int64_t argmin = 0;
};

enum class Side { Upper, Lower };

/// gamma^{(ell')} for ell' = 0..last with the given normalized counts.
inline GammaScan scan_ipq_gammas(Side side, double x, double b, std::int64_t d_g, std::int64_t d_tilde,
                                 double load, double m, std::int64_t last, const ServiceLaw& law,
                                 bool enforce_cap) {
  GammaScan scan;
  const std::int64_t top = std::min(last, kEllCap);
  for (std::int64_t lp = 0; lp <= top; ++lp) {
    RateResult r;
    double gamma = kInf;
    if (lp == 0) {
      r = sup_rate(x - static_cast<double>(d_g) * b, m, law);
      gamma = r.value;
    } else {
      const double l = static_cast<double>(lp);
      const double shift = side == Side::Upper ? static_cast<double>((lp - 1) * d_tilde - d_g)
                                               : static_cast<double>(lp * d_tilde - d_g);
      const double coeff = side == Side::Upper ? load + m / l : ((l - 1.0) * load + m) / l;
      r = sup_rate(x / l + shift * b / l, coeff, law);
      gamma = l * r.value;
    }
    scan.gammas.push_back(gamma);
    scan.thetas.push_back(r.theta_star);
    if (gamma < scan.gammas[static_cast<std::size_t>(scan.argmin)]) scan.argmin = lp;
  }
  if (enforce_cap && last > kEllCap && scan.argmin == kEllCap &&
      scan.gammas[kEllCap] < scan.gammas[kEllCap - 1])
    throw Error(ErrorCode::MinimizerAtCap, "minimizing ell' still decreasing at the scan cap");
  return scan;
}

inline BoundReport report_from_scan(const GammaScan& scan, double prefactor, double extra, std::int64_t n) {
  BoundReport rep;
  const auto idx = static_cast<std::size_t>(scan.argmin);
  rep.exponent = scan.gammas[idx] + extra;
  rep.argmin_ell = scan.argmin;
  rep.theta_star = scan.thetas[idx];
  rep.prefactor = prefactor;
  rep.n = n;
  rep.gammas = scan.gammas;
  rep.probability = clamp_probability(prefactor, static_cast<double>(n), rep.exponent);
  return rep;
}

}  // namespace detail

/// Union-plus-Chernoff upper bound on Pr(A_{g,i}(k) >= n x).
inline BoundReport theorem1_upper(const SystemSpec& spec, const IterationSchedule& sched, SourceId s,
                                  std::int64_t k, double x) {
  check_source(spec, s);
  if (k < 1) throw Error(ErrorCode::KTooSmall, "k must be >= 1");
  require_stable(spec, sched);
  const std::int64_t d_g = spec.group(s.g).d;
  const double m = m_ratio(spec, sched, s, k);
  const double load = iteration_load_ratio(spec, sched);
  const std::int64_t kp = k_prime(k_tilde(d_g, k), sched.d_tilde);
  const auto scan =
      detail::scan_ipq_gammas(detail::Side::Upper, x, spec.b, d_g, sched.d_tilde, load, m, kp, spec.service, true);
  const double c_prime = static_cast<double>(scan.argmin + 1);
  auto rep = detail::report_from_scan(scan, static_cast<double>(sched.d_tilde) * c_prime + 1.0, 0.0, spec.scale_n());
  rep.below_floor = x <= static_cast<double>(d_g) * spec.b;
  return rep;
}

/// Single-path lower bound on Pr(A_{g,i}(k) >= n x); epsilon is added to the exponent.
inline BoundReport theorem2_lower(const SystemSpec& spec, const IterationSchedule& sched, SourceId s,
                                  std::int64_t k, double x, double epsilon = 0.0) {
  check_source(spec, s);
  if (k < 1) throw Error(ErrorCode::KTooSmall, "k must be >= 1");
  if (epsilon < 0.0) throw Error(ErrorCode::NonPositiveParameter, "epsilon must be >= 0");
  require_stable(spec, sched);
  const std::int64_t d_g = spec.group(s.g).d;
  const double m = m_ratio(spec, sched, s, k);
  const double load = iteration_load_ratio(spec, sched);
  const std::int64_t kp = k_prime(k_tilde(d_g, k), sched.d_tilde);
  const auto scan =
      detail::scan_ipq_gammas(detail::Side::Lower, x, spec.b, d_g, sched.d_tilde, load, m, kp, spec.service, true);
  auto rep = detail::report_from_scan(scan, 1.0, epsilon, spec.scale_n());
  rep.below_floor = x <= static_cast<double>(d_g) * spec.b;
  return rep;
}

/// Normalized counts in the many-source limit. Group sizes and the source's
/// position enter only as fractions: alpha_j for whole groups and
/// (i / n_g) * alpha_g for the partial group, which keeps the queried
/// source at the same relative position as n grows.
struct LimitRatios {
  double m = 0.0;     // lim |J^-| / n
  double load = 0.0;  // sum_j (d~/d_j) alpha_j
};

inline LimitRatios limit_ratios(const SystemSpec& spec, const IterationSchedule& sched, SourceId s, std::int64_t k) {
  check_source(spec, s);
  LimitRatios lim;
  for (int g = 1; g <= spec.num_groups(); ++g)
    lim.load += static_cast<double>(sched.d_tilde / spec.group(g).d) * spec.alpha(g);
  const std::int64_t round = service_round(spec, s, k) % sched.d_tilde;
  for (int g = 1; g < s.g; ++g)
    if (round % spec.group(g).d == 0) lim.m += spec.alpha(g);
  if (!spec.is_virtual(s))
    lim.m += static_cast<double>(s.i) / static_cast<double>(spec.group(s.g).count) * spec.alpha(s.g);
  return lim;
}

/// (lower, upper) bounds on the asymptotic decay rate -lim (1/n) log Pr.
inline std::pair<double, double> corollary1_asymptotic(const SystemSpec& spec, const IterationSchedule& sched,
                                                       SourceId s, std::int64_t k, double x) {
  if (k < 1) throw Error(ErrorCode::KTooSmall, "k must be >= 1");
  require_stable(spec, sched);
  const auto lim = limit_ratios(spec, sched, s, k);
  const std::int64_t d_g = spec.group(s.g).d;
  const std::int64_t kp = k_prime(k_tilde(d_g, k), sched.d_tilde);
  const auto up = detail::scan_ipq_gammas(detail::Side::Upper, x, spec.b, d_g, sched.d_tilde, lim.load, lim.m, kp,
                                          spec.service, true);
  const auto lo = detail::scan_ipq_gammas(detail::Side::Lower, x, spec.b, d_g, sched.d_tilde, lim.load, lim.m, kp,
                                          spec.service, true);
  return {lo.gammas[static_cast<std::size_t>(lo.argmin)], up.gammas[static_cast<std::size_t>(up.argmin)]};
}

struct LongRunBound {
  double probability_bound = 1.0;  // clamped to [0, 1]
  double decay_rate_bound = 0.0;   // sum over phases of the per-phase min gamma
  std::int64_t c_prime = 1;
  std::vector<double> phase_exponents;  // min gamma for zeta = 1 .. d~/d_g
};

/// Long-run fraction of violating updates, grouping updates by their phase
/// zeta within an iteration and minimizing over every ell' >= 0.
inline LongRunBound corollary2_longrun(const SystemSpec& spec, const IterationSchedule& sched, SourceId s, double x) {
  check_source(spec, s);
  require_stable(spec, sched);
  const std::int64_t d_g = spec.group(s.g).d;
  const std::int64_t phases = sched.d_tilde / d_g;
  LongRunBound out;
  std::int64_t worst_argmin = 0;
  for (std::int64_t zeta = 1; zeta <= phases; ++zeta) {
    const auto lim = limit_ratios(spec, sched, s, zeta);
    const auto scan = detail::scan_ipq_gammas(detail::Side::Upper, x, spec.b, d_g, sched.d_tilde, lim.load, lim.m,
                                              kEllCap + 1, spec.service, true);
    out.phase_exponents.push_back(scan.gammas[static_cast<std::size_t>(scan.argmin)]);
    worst_argmin = std::max(worst_argmin, scan.argmin);
  }
  out.c_prime = worst_argmin + 1;
  const double n = static_cast<double>(spec.scale_n());
  const double pre = static_cast<double>(d_g) / static_cast<double>(sched.d_tilde) *
                     (static_cast<double>(sched.d_tilde * out.c_prime) + 1.0);
  double total = 0.0;
  for (double e : out.phase_exponents) {
    total += e == kInf ? 0.0 : pre * std::exp(-n * e);
    out.decay_rate_bound += e;
  }
  out.probability_bound = std::clamp(total, 0.0, 1.0);
  return out;
}

struct HomogeneousBounds {
  BoundReport upper;
  BoundReport lower;
};

/// One group of n sources with period n*b. Both bounds share the exponent
/// min_{0<=ell'<=k-1} gamma_i^{(ell')}, with theta restricted to
/// Lambda_v(theta) < theta*b.
inline HomogeneousBounds homogeneous_bounds(std::int64_t n, double b, const ServiceLaw& law, std::int64_t i,
                                            std::int64_t k, double x) {
  if (n < 1 || i < 1 || i > n) throw Error(ErrorCode::InvalidSource, "need 1 <= i <= n");
  if (k < 1) throw Error(ErrorCode::KTooSmall, "k must be >= 1");
  if (!(mean(law) < b)) throw Error(ErrorCode::StabilityViolated, "mean service must be below b");
  const ThetaConstraint stable = [&](double th) { return logmgf(law, th) - th * b < 0.0; };
  const double own = static_cast<double>(i) / static_cast<double>(n);

  detail::GammaScan scan;
  const std::int64_t top = std::min(k - 1, kEllCap);
  for (std::int64_t lp = 0; lp <= top; ++lp) {
    RateResult r;
    double gamma = kInf;
    if (lp == 0) {
      r = sup_rate(x - b, own, law, stable);
      gamma = r.value;
    } else {
      const double l = static_cast<double>(lp);
      r = sup_rate(x / l + (l - 1.0) * b / l, (l + own) / l, law, stable);
      gamma = l * r.value;
    }
    scan.gammas.push_back(gamma);
    scan.thetas.push_back(r.theta_star);
    if (gamma < scan.gammas[static_cast<std::size_t>(scan.argmin)]) scan.argmin = lp;
  }
  HomogeneousBounds out;
  out.upper = detail::report_from_scan(scan, static_cast<double>(scan.argmin + 1) + 1.0, 0.0, n);
  out.lower = detail::report_from_scan(scan, 1.0, 0.0, n);
  out.upper.below_floor = out.lower.below_floor = x <= b;
  return out;
}

enum class Regime { PlugIn, LargeRate, SmallRate };

/// Exponential-service approximations of min_{ell'} gamma^{(U,ell')}(x,k,inf).
/// PlugIn substitutes theta* = lambda - C/x (C the Lambda_v coefficient)
/// into the shifted objective; LargeRate assumes b >> 1/lambda and SmallRate
/// b ~ 1/lambda.
inline double approx_exponents_ipq(const SystemSpec& spec, const IterationSchedule& sched, SourceId s,
                                   std::int64_t k, double x, Regime regime) {
  const auto* expo = std::get_if<Exponential>(&spec.service);
  if (!expo) throw Error(ErrorCode::WrongLaw, "closed forms need exponential service");
  if (k < 1) throw Error(ErrorCode::KTooSmall, "k must be >= 1");
  const double lambda = expo->rate;
  const double b = spec.b;
  const auto lim = limit_ratios(spec, sched, s, k);
  const double dg = static_cast<double>(spec.group(s.g).d);
  const double dt = static_cast<double>(sched.d_tilde);
  const std::int64_t kp = std::min(k_prime(k_tilde(spec.group(s.g).d, k), sched.d_tilde), kEllCap);

  double best = kInf;
  for (std::int64_t lp = 0; lp <= kp; ++lp) {
    const double l = static_cast<double>(lp);
    const double c = l * lim.load + lim.m;
    const double log_term = c * (1.0 + std::log(lambda * x / c));
    double gamma = kInf;
    if (lp == 0) {
      switch (regime) {
        case Regime::PlugIn: gamma = lambda * x - dg * (lambda * b - c / x * b) - log_term; break;
        case Regime::LargeRate: gamma = lambda * (x - dg * b); break;
        case Regime::SmallRate: gamma = lambda * x - dg * (1.0 - c / x * b) - log_term; break;
      }
    } else {
      const double carry = dt * (l - 1.0) * c * b / x;
      switch (regime) {
        case Regime::PlugIn:
          gamma = lambda * x - dg * (lambda * b - c * b / x) - carry - log_term + (l - 1.0) * dt * lambda * b;
          break;
        case Regime::LargeRate:
          gamma = lambda * x - dg * lambda * b - carry + (l - 1.0) * dt * lambda * b - log_term;
          break;
        case Regime::SmallRate:
          gamma = lambda * x - dg * (1.0 - c * b / x) - carry + (l - 1.0) * dt - log_term;
          break;
      }
    }
    best = std::min(best, gamma);
  }
  return best;
}

}  // namespace aoi
