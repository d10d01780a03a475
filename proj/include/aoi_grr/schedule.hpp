#pragma once

// Generalized round-robin iteration schedule and the slot counts that the
// analytic bounds are built from.

#include <cstdint>
#include <numeric>
#include <ostream>
#include <vector>

#include "aoi_grr/error.hpp"
#include "aoi_grr/model.hpp"

namespace aoi {

/// One GRR iteration: d_tilde rounds; group g is served in round r iff
/// r mod d_g == 0. Within a round groups ascend, then sources ascend.
struct IterationSchedule {
  std::int64_t d_tilde = 1;
  std::vector<std::vector<SourceId>> rounds;

  const std::vector<SourceId>& round(std::int64_t global_round) const {
    return rounds[static_cast<std::size_t>(global_round % d_tilde)];
  }
};

inline IterationSchedule build_schedule(const SystemSpec& spec) {
  IterationSchedule sched;
  std::int64_t lcm = 1;
  for (const auto& grp : spec.groups) lcm = std::lcm(lcm, grp.d);
  sched.d_tilde = lcm;
  sched.rounds.resize(static_cast<std::size_t>(lcm));
  for (std::int64_t r = 0; r < lcm; ++r) {
    auto& round = sched.rounds[static_cast<std::size_t>(r)];
    for (int g = 1; g <= spec.num_groups(); ++g) {
      const auto& grp = spec.group(g);
      if (r % grp.d != 0) continue;
      for (std::int64_t i = 1; i <= grp.count; ++i) round.push_back(SourceId{g, static_cast<int>(i)});
    }
  }
  return sched;
}

/// Conventional round robin: every source in every round, regardless of how
/// often its packets arrive.
inline IterationSchedule build_rr_schedule(const SystemSpec& spec) {
  IterationSchedule sched;
  sched.d_tilde = 1;
  sched.rounds.resize(1);
  for (int g = 1; g <= spec.num_groups(); ++g)
    for (std::int64_t i = 1; i <= spec.group(g).count; ++i)
      sched.rounds[0].push_back(SourceId{g, static_cast<int>(i)});
  return sched;
}

// Index maps between the k-th update of a source and the update index of the
// round's leading source (1,1).

/// Update index of source (1,1) in the round that carries update k of a
/// group with multiplier d_g.
constexpr std::int64_t k_tilde(std::int64_t d_g, std::int64_t k) { return d_g * (k - 1) + 1; }

constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return a <= 0 ? 0 : (a + b - 1) / b; }

/// Number of whole iterations spanned from (1,1)'s update ell to update k_tilde.
constexpr std::int64_t ell_prime(std::int64_t ell, std::int64_t kt, std::int64_t d_tilde) {
  return ceil_div(kt - ell, d_tilde);
}

constexpr std::int64_t k_prime(std::int64_t kt, std::int64_t d_tilde) { return ceil_div(kt - 1, d_tilde); }

/// Global (0-based) round in which update k of group g is served.
inline std::int64_t service_round(const SystemSpec& spec, SourceId s, std::int64_t k) {
  return spec.group(s.g).d * (k - 1);
}

/// Non-virtual service slots in a round.
inline std::int64_t real_slots(const SystemSpec& spec, const IterationSchedule& sched, std::int64_t global_round) {
  std::int64_t total = 0;
  for (const auto& s : sched.round(global_round))
    if (!spec.is_virtual(s)) ++total;
  return total;
}

/// |J^-_{g,i}(k)|: real slots in the round carrying update k of s, from the
/// round's first slot up to and including s's own slot.
inline std::int64_t count_J_minus(const SystemSpec& spec, const IterationSchedule& sched, SourceId s,
                                  std::int64_t k) {
  check_source(spec, s);
  if (k < 1) throw Error(ErrorCode::KTooSmall, "k must be >= 1");
  const auto& round = sched.round(service_round(spec, s, k));
  std::int64_t count = 0;
  for (const auto& slot : round) {
    if (!spec.is_virtual(slot)) ++count;
    if (slot == s) return count;
  }
  throw Error(ErrorCode::SourceNotServedInRound, "source absent from its service round");
}

/// |I_{g,i}(k-1)|: real slots from s's (k-1)-th service (inclusive) to the
/// start of its k-th service (exclusive).
inline std::int64_t count_I(const SystemSpec& spec, const IterationSchedule& sched, SourceId s, std::int64_t k) {
  check_source(spec, s);
  if (k < 2) throw Error(ErrorCode::KTooSmall, "count_I needs k >= 2");
  const std::int64_t first = service_round(spec, s, k - 1);
  const std::int64_t last = service_round(spec, s, k);
  std::int64_t count = 0;
  bool seen = false;
  for (const auto& slot : sched.round(first)) {
    seen = seen || slot == s;
    if (seen && !spec.is_virtual(slot)) ++count;
  }
  if (!seen) throw Error(ErrorCode::SourceNotServedInRound, "source absent from its service round");
  for (std::int64_t r = first + 1; r < last; ++r) count += real_slots(spec, sched, r);
  for (const auto& slot : sched.round(last)) {
    if (slot == s) return count;
    if (!spec.is_virtual(slot)) ++count;
  }
  throw Error(ErrorCode::SourceNotServedInRound, "source absent from its service round");
}

/// m_{g,i}(k) = |J^-| / n.
inline double m_ratio(const SystemSpec& spec, const IterationSchedule& sched, SourceId s, std::int64_t k) {
  return static_cast<double>(count_J_minus(spec, sched, s, k)) / static_cast<double>(spec.scale_n());
}

/// t_{g,i}(k-1) = |I| / n.
inline double t_ratio(const SystemSpec& spec, const IterationSchedule& sched, SourceId s, std::int64_t k) {
  return static_cast<double>(count_I(spec, sched, s, k)) / static_cast<double>(spec.scale_n());
}

/// sum_j (d_tilde / d_j) alpha_j: real services in one iteration, over n.
inline double iteration_load_ratio(const SystemSpec& spec, const IterationSchedule& sched) {
  double total = 0.0;
  for (int g = 1; g <= spec.num_groups(); ++g)
    total += static_cast<double>(sched.d_tilde / spec.group(g).d) * spec.alpha(g);
  return total;
}

inline void print_schedule(std::ostream& os, const SystemSpec& spec, const IterationSchedule& sched,
                           std::int64_t num_rounds) {
  for (std::int64_t r = 0; r < num_rounds; ++r) {
    os << "round " << r << ":";
    for (const auto& s : sched.round(r)) {
      if (spec.is_virtual(s)) continue;
      os << " (" << spec.user_group(s.g) << "," << s.i << ")";
    }
    os << "\n";
  }
}

}  // namespace aoi
