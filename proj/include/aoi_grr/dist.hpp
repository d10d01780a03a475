#pragma once

// Service-time laws: sampling, log-MGF and the domain on which it is finite.

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <variant>

#include "aoi_grr/error.hpp"

namespace aoi {

struct Exponential {
  double rate;  // lambda; mean 1/rate
  bool operator==(const Exponential&) const = default;
};

/// Slotted retransmission over an erasure channel: number of slots until the
/// first success, support {1, 2, ...}.
struct Geometric {
  double p;  // per-slot success probability
  bool operator==(const Geometric&) const = default;
};

struct Deterministic {
  double v;
  bool operator==(const Deterministic&) const = default;
};

using ServiceLaw = std::variant<Exponential, Geometric, Deterministic>;

using Rng = std::mt19937_64;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline void validate(const ServiceLaw& law) {
  std::visit(
      [](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Exponential>) {
          if (!(l.rate > 0.0) || !std::isfinite(l.rate))
            throw Error(ErrorCode::NonPositiveParameter, "exponential rate must be > 0");
        } else if constexpr (std::is_same_v<L, Geometric>) {
          if (!(l.p > 0.0 && l.p < 1.0))
            throw Error(ErrorCode::NonPositiveParameter, "geometric p must lie in (0,1)");
        } else {
          if (!(l.v >= 0.0) || !std::isfinite(l.v))
            throw Error(ErrorCode::NonPositiveParameter, "deterministic v must be >= 0");
        }
      },
      law);
}

inline double mean(const ServiceLaw& law) {
  return std::visit(
      [](const auto& l) -> double {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Exponential>) return 1.0 / l.rate;
        else if constexpr (std::is_same_v<L, Geometric>) return 1.0 / l.p;
        else return l.v;
      },
      law);
}

/// Supremum of the interval [0, theta_max) on which the log-MGF is finite.
inline double theta_max(const ServiceLaw& law) {
  return std::visit(
      [](const auto& l) -> double {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Exponential>) return l.rate;
        else if constexpr (std::is_same_v<L, Geometric>) return -std::log1p(-l.p);
        else return kInf;
      },
      law);
}

inline void check_theta(const ServiceLaw& law, double theta) {
  if (!(theta >= 0.0) || !(theta < theta_max(law)))
    throw Error(ErrorCode::ThetaOutOfDomain, "theta=" + std::to_string(theta));
}

/// Lambda_v(theta) = log E[exp(theta V)].
inline double logmgf(const ServiceLaw& law, double theta) {
  check_theta(law, theta);
  return std::visit(
      [theta](const auto& l) -> double {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Exponential>) {
          return -std::log1p(-theta / l.rate);
        } else if constexpr (std::is_same_v<L, Geometric>) {
          // ln(p e^t / (1 - (1-p) e^t))
          return std::log(l.p) + theta - std::log1p(-(1.0 - l.p) * std::exp(theta));
        } else {
          return theta * l.v;
        }
      },
      law);
}

/// d/dtheta Lambda_v(theta).
inline double dlogmgf(const ServiceLaw& law, double theta) {
  check_theta(law, theta);
  return std::visit(
      [theta](const auto& l) -> double {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Exponential>) {
          return 1.0 / (l.rate - theta);
        } else if constexpr (std::is_same_v<L, Geometric>) {
          return 1.0 / (1.0 - (1.0 - l.p) * std::exp(theta));
        } else {
          return l.v;
        }
      },
      law);
}

inline double sample(const ServiceLaw& law, Rng& rng) {
  return std::visit(
      [&rng](const auto& l) -> double {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Exponential>) {
          return std::exponential_distribution<double>(l.rate)(rng);
        } else if constexpr (std::is_same_v<L, Geometric>) {
          // std::geometric_distribution counts failures before the first success.
          return static_cast<double>(std::geometric_distribution<long long>(l.p)(rng) + 1);
        } else {
          return l.v;
        }
      },
      law);
}

inline std::string describe(const ServiceLaw& law) {
  return std::visit(
      [](const auto& l) -> std::string {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Exponential>) return "exponential(rate=" + std::to_string(l.rate) + ")";
        else if constexpr (std::is_same_v<L, Geometric>) return "geometric(p=" + std::to_string(l.p) + ")";
        else return "deterministic(v=" + std::to_string(l.v) + ")";
      },
      law);
}

}  // namespace aoi
