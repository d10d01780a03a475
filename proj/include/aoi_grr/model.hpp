#pragma once

// System description shared by the simulator and the analytic bounds.
//
// Group g holds `count` sources whose packets arrive in synchronized batches
// every d_g * n * b time units. What "n" means is selected by NScaling:
//   TotalSources  - n is the total number of (non-virtual) sources,
//   PerGroupSize  - n is the common size of every group.
// An explicit `n` overrides both. All normalized quantities (alpha_g, m, t)
// are counts divided by this same n, so the bounds are consistent with the
// simulated periods and thresholds under either choice.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aoi_grr/dist.hpp"
#include "aoi_grr/error.hpp"

namespace aoi {

struct GroupSpec {
  std::int64_t d = 1;
  std::int64_t count = 1;
  bool is_virtual = false;  // zero-service filler group, never reported

  bool operator==(const GroupSpec&) const = default;
};

enum class NScaling { TotalSources, PerGroupSize };

struct SourceId {
  int g = 1;  // 1-based group index into SystemSpec::groups
  int i = 1;  // 1-based index within the group

  bool operator==(const SourceId&) const = default;
};

struct SystemSpec {
  std::vector<GroupSpec> groups;
  double b = 1.0;
  ServiceLaw service = Exponential{1.0};
  NScaling n_scaling = NScaling::TotalSources;
  std::optional<std::int64_t> n_override;

  bool operator==(const SystemSpec&) const = default;

  int num_groups() const { return static_cast<int>(groups.size()); }
  const GroupSpec& group(int g) const { return groups.at(static_cast<std::size_t>(g - 1)); }

  bool has_virtual() const { return !groups.empty() && groups.front().is_virtual; }

  /// Internal group index for a user-facing (virtual-free) group index.
  int internal_group(int user_g) const { return user_g + (has_virtual() ? 1 : 0); }
  int user_group(int g) const { return g - (has_virtual() ? 1 : 0); }
  int num_user_groups() const { return num_groups() - (has_virtual() ? 1 : 0); }

  std::int64_t total_real_sources() const {
    std::int64_t total = 0;
    for (const auto& grp : groups)
      if (!grp.is_virtual) total += grp.count;
    return total;
  }

  /// The scaling count n in the period d_g*n*b and the threshold n*x.
  std::int64_t scale_n() const {
    if (n_override) return *n_override;
    if (n_scaling == NScaling::TotalSources) return total_real_sources();
    std::optional<std::int64_t> common;
    for (const auto& grp : groups) {
      if (grp.is_virtual) continue;
      if (common && *common != grp.count)
        throw Error(ErrorCode::InconsistentGroupSizes,
                    "per-group n scaling needs equal group sizes or an explicit n");
      common = grp.count;
    }
    if (!common) throw Error(ErrorCode::EmptyGroups, "no real groups");
    return *common;
  }

  /// alpha_g = n_g / n; zero for the virtual group.
  double alpha(int g) const {
    const auto& grp = group(g);
    return grp.is_virtual ? 0.0 : static_cast<double>(grp.count) / static_cast<double>(scale_n());
  }

  /// Start of global round R: the instant its batch arrives.
  double round_time(std::int64_t round) const {
    return static_cast<double>(round) * (static_cast<double>(scale_n()) * b);
  }

  double period(int g) const { return round_time(group(g).d); }

  bool valid_source(SourceId s) const {
    return s.g >= 1 && s.g <= num_groups() && s.i >= 1 && s.i <= group(s.g).count;
  }

  bool is_virtual(SourceId s) const { return group(s.g).is_virtual; }
};

inline void check_source(const SystemSpec& spec, SourceId s) {
  if (!spec.valid_source(s))
    throw Error(ErrorCode::InvalidSource,
                "source (" + std::to_string(s.g) + "," + std::to_string(s.i) + ") out of range");
}

/// Validates the spec and prepends a one-source zero-service group with d=1
/// when the first group has d > 1, so that every round has a leading slot.
inline SystemSpec validate_and_normalize(SystemSpec spec) {
  if (spec.groups.empty()) throw Error(ErrorCode::EmptyGroups, "at least one group required");
  if (!(spec.b > 0.0) || !std::isfinite(spec.b))
    throw Error(ErrorCode::NonPositiveParameter, "b must be > 0");
  if (spec.n_override && *spec.n_override < 1)
    throw Error(ErrorCode::NonPositiveParameter, "n must be >= 1");
  validate(spec.service);

  for (std::size_t k = 0; k < spec.groups.size(); ++k) {
    const auto& grp = spec.groups[k];
    if (grp.d < 1 || grp.count < 1)
      throw Error(ErrorCode::NonPositiveParameter, "group d and count must be >= 1");
    if (grp.is_virtual && (k != 0 || grp.d != 1 || grp.count != 1))
      throw Error(ErrorCode::ConfigError, "a virtual group may only lead with d=1, count=1");
    if (k > 0 && grp.d <= spec.groups[k - 1].d)
      throw Error(ErrorCode::DuplicateOrDecreasingD, "group d values must strictly increase");
  }
  if (spec.total_real_sources() == 0) throw Error(ErrorCode::EmptyGroups, "no real groups");

  if (spec.groups.front().d > 1)
    spec.groups.insert(spec.groups.begin(), GroupSpec{1, 1, true});

  (void)spec.scale_n();  // surfaces InconsistentGroupSizes early
  return spec;
}

}  // namespace aoi
