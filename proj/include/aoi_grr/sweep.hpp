#pragma once

// Parameter sweeps producing the CSV dataset used for figures. One row per
// (axis value, group): Monte Carlo estimate, analytic bounds where defined,
// and a conventional round-robin baseline.
//
// Sweep block of a config file:
//   "sweep": {
//     "axis": "n" | "arrival_period" | "mean_service",
//     "values": [4, 6, 8],
//     "discipline": "ipq" | "spq",
//     "x": [8, 14, 25],            // one threshold per group
//     "round": 16,                 // global round; k_g = round / d_g + 1
//     "k": [17, 9, 5],             // alternative to "round"
//     "longrun": false,            // long-run fraction instead of fixed k
//     "iterations": 20000,         // trajectory length in long-run mode
//     "reps": 100000,
//     "sources": [10, 10, 10],     // source index per group, default last
//     "rr": true                   // include the RR baseline
//   }
// axis = n sets every group's count; arrival_period sets n*b (so b =
// value / n); mean_service sets the mean of the configured law.

#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "aoi_grr/bounds_ipq.hpp"
#include "aoi_grr/bounds_spq.hpp"
#include "aoi_grr/config.hpp"
#include "aoi_grr/mc.hpp"

namespace aoi {

inline constexpr const char* kSweepSchema = "aoi-grr-sweep/1";

enum class SweepAxis { N, ArrivalPeriod, MeanService };

inline const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::N: return "n";
    case SweepAxis::ArrivalPeriod: return "arrival_period";
    case SweepAxis::MeanService: return "mean_service";
  }
  return "?";
}

struct SweepSpec {
  SweepAxis axis = SweepAxis::N;
  std::vector<double> values;
  Discipline discipline = Discipline::IPQ;
  std::vector<double> x;               // per user group
  std::vector<std::int64_t> k;         // per user group (fixed-k mode)
  bool longrun = false;
  std::int64_t iterations = 20000;
  std::int64_t reps = 100000;
  std::vector<std::int64_t> sources;   // per user group; empty = last source
  bool rr = true;
};

inline SweepSpec parse_sweep(const json& j, const SystemSpec& base) {
  SweepSpec sw;
  try {
    const auto axis = j.at("axis").get<std::string>();
    if (axis == "n") sw.axis = SweepAxis::N;
    else if (axis == "arrival_period") sw.axis = SweepAxis::ArrivalPeriod;
    else if (axis == "mean_service") sw.axis = SweepAxis::MeanService;
    else throw Error(ErrorCode::ConfigError, "unknown sweep axis '" + axis + "'");
    sw.values = j.at("values").get<std::vector<double>>();
    const auto disc = j.value("discipline", std::string("ipq"));
    if (disc != "ipq" && disc != "spq") throw Error(ErrorCode::ConfigError, "discipline must be ipq or spq");
    sw.discipline = disc == "ipq" ? Discipline::IPQ : Discipline::SPQ;
    sw.x = j.at("x").get<std::vector<double>>();
    sw.longrun = j.value("longrun", false);
    sw.iterations = j.value("iterations", sw.iterations);
    sw.reps = j.value("reps", sw.reps);
    sw.rr = j.value("rr", true);
    if (j.contains("sources")) sw.sources = j.at("sources").get<std::vector<std::int64_t>>();
    if (j.contains("k")) {
      sw.k = j.at("k").get<std::vector<std::int64_t>>();
    } else if (!sw.longrun) {
      const auto round = j.value("round", std::int64_t{0});
      for (const auto& g : base.groups) sw.k.push_back(round / g.d + 1);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  const auto ng = base.groups.size();
  if (sw.values.empty()) throw Error(ErrorCode::ConfigError, "sweep values must be nonempty");
  for (std::size_t v = 1; v < sw.values.size(); ++v)
    if (!(sw.values[v] > sw.values[v - 1])) throw Error(ErrorCode::ConfigError, "sweep values must increase");
  if (sw.x.size() != ng) throw Error(ErrorCode::ConfigError, "need one threshold per group");
  if (!sw.longrun && sw.k.size() != ng) throw Error(ErrorCode::ConfigError, "need one k per group");
  if (!sw.sources.empty() && sw.sources.size() != ng) throw Error(ErrorCode::ConfigError, "need one source per group");
  return sw;
}

/// The spec at one axis value (user groups only, not normalized).
inline SystemSpec spec_at(const SystemSpec& base, SweepAxis axis, double value) {
  SystemSpec spec = base;
  switch (axis) {
    case SweepAxis::N:
      for (auto& g : spec.groups) g.count = static_cast<std::int64_t>(value);
      break;
    case SweepAxis::ArrivalPeriod:
      spec.b = value / static_cast<double>(spec.scale_n());
      break;
    case SweepAxis::MeanService:
      std::visit(
          [value](auto& l) {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, Exponential>) l.rate = 1.0 / value;
            else if constexpr (std::is_same_v<L, Geometric>) l.p = 1.0 / value;
            else l.v = value;
          },
          spec.service);
      break;
  }
  return spec;
}

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

inline void add_flag(std::string& flags, const std::string& f) {
  if (!flags.empty()) flags += ';';
  flags += f;
}

}  // namespace detail

inline void write_sweep_header(std::ostream& os) {
  os << "schema_id,axis,axis_value,discipline,g,i,k_or_longrun,x,p_hat,ci_low,ci_high,ub_prob,lb_prob,"
        "ub_exponent,lb_exponent,rr_p_hat,flags\n";
}

/// Runs the sweep and streams rows to `os`. Errors at a point are written
/// into that point's flags and the sweep moves on.
inline void run_sweep(const SweepSpec& sw, const SystemSpec& base, std::uint64_t seed, std::ostream& os,
                      unsigned threads = default_threads()) {
  write_sweep_header(os);
  const auto ng = static_cast<int>(base.groups.size());
  for (std::size_t vi = 0; vi < sw.values.size(); ++vi) {
    const double value = sw.values[vi];
    const std::uint64_t point_seed = replication_seed(seed, 0x5EED0000ULL + vi);

    struct Row {
      std::int64_t i = 1;
      std::optional<McEstimate> mc, rr;
      std::optional<double> ub_prob, lb_prob, ub_exp, lb_exp;
      std::string flags;
    };
    std::vector<Row> rows(static_cast<std::size_t>(ng));

    std::optional<SystemSpec> spec;
    std::optional<IterationSchedule> sched;
    try {
      spec = validate_and_normalize(spec_at(base, sw.axis, value));
      sched = build_schedule(*spec);
    } catch (const Error& e) {
      for (auto& r : rows) detail::add_flag(r.flags, std::string("spec:") + std::string(to_string(e.code())));
    }

    if (spec) {
      std::vector<SourceId> src(static_cast<std::size_t>(ng));
      for (int ug = 1; ug <= ng; ++ug) {
        const int g = spec->internal_group(ug);
        auto& r = rows[static_cast<std::size_t>(ug - 1)];
        r.i = sw.sources.empty() ? spec->group(g).count
                                 : std::min(sw.sources[static_cast<std::size_t>(ug - 1)], spec->group(g).count);
        src[static_cast<std::size_t>(ug - 1)] = SourceId{g, static_cast<int>(r.i)};
      }

      // Monte Carlo and baseline.
      const auto rr_sched = build_rr_schedule(*spec);
      if (sw.longrun) {
        for (int ug = 1; ug <= ng; ++ug) {
          auto& r = rows[static_cast<std::size_t>(ug - 1)];
          const double x = sw.x[static_cast<std::size_t>(ug - 1)];
          const auto s = src[static_cast<std::size_t>(ug - 1)];
          try {
            r.mc = estimate_longrun_fraction(*spec, sw.discipline, s, x, sw.iterations, point_seed + ug);
            if (sw.rr)
              r.rr = estimate_longrun_fraction(*spec, sw.discipline, s, x, sw.iterations, point_seed + 100 + ug,
                                               &rr_sched);
          } catch (const Error& e) {
            detail::add_flag(r.flags, std::string("mc:") + std::string(to_string(e.code())));
          }
        }
      } else {
        std::vector<ViolationQuery> qs;
        for (int ug = 1; ug <= ng; ++ug)
          qs.push_back({src[static_cast<std::size_t>(ug - 1)], sw.k[static_cast<std::size_t>(ug - 1)],
                        sw.x[static_cast<std::size_t>(ug - 1)]});
        try {
          const auto est = estimate_violations(*spec, sw.discipline, qs, sw.reps, point_seed, threads);
          for (int ug = 1; ug <= ng; ++ug) rows[static_cast<std::size_t>(ug - 1)].mc = est[static_cast<std::size_t>(ug - 1)];
          if (sw.rr) {
            const auto rr = estimate_violations(*spec, sw.discipline, qs, sw.reps, point_seed + 1, threads, &rr_sched);
            for (int ug = 1; ug <= ng; ++ug) rows[static_cast<std::size_t>(ug - 1)].rr = rr[static_cast<std::size_t>(ug - 1)];
          }
        } catch (const Error& e) {
          for (auto& r : rows) detail::add_flag(r.flags, std::string("mc:") + std::string(to_string(e.code())));
        }
      }

      // Bounds.
      for (int ug = 1; ug <= ng; ++ug) {
        auto& r = rows[static_cast<std::size_t>(ug - 1)];
        const auto s = src[static_cast<std::size_t>(ug - 1)];
        const double x = sw.x[static_cast<std::size_t>(ug - 1)];
        try {
          if (sw.discipline == Discipline::IPQ) {
            if (sw.longrun) {
              const auto lr = corollary2_longrun(*spec, *sched, s, x);
              r.ub_prob = lr.probability_bound;
              r.ub_exp = lr.decay_rate_bound;
            } else {
              const std::int64_t k = sw.k[static_cast<std::size_t>(ug - 1)];
              const auto up = theorem1_upper(*spec, *sched, s, k, x);
              const auto lo = theorem2_lower(*spec, *sched, s, k, x, 0.0);
              r.ub_prob = up.probability;
              r.ub_exp = up.exponent;
              r.lb_prob = lo.probability;
              r.lb_exp = lo.exponent;
              if (up.below_floor) detail::add_flag(r.flags, "below_floor");
            }
          } else {
            if (sw.longrun) {
              r.ub_exp = corollary7_longrun(*spec, *sched, s, x);
            } else {
              const auto up = theorem3_upper(*spec, *sched, SpqBoundQuery{s, sw.k[static_cast<std::size_t>(ug - 1)], x});
              r.ub_prob = up.probability;
              r.ub_exp = up.exponent;
              if (up.below_floor) detail::add_flag(r.flags, "below_floor");
            }
          }
        } catch (const Error& e) {
          detail::add_flag(r.flags, std::string("bound:") + std::string(to_string(e.code())));
        }
      }
    }

    for (int ug = 1; ug <= ng; ++ug) {
      auto& r = rows[static_cast<std::size_t>(ug - 1)];
      if (r.mc && r.mc->below_resolution) detail::add_flag(r.flags, "below_resolution");
      if (r.rr && r.rr->below_resolution) detail::add_flag(r.flags, "rr_below_resolution");
      auto opt = [](const std::optional<double>& v) { return v ? detail::fmt(*v) : std::string(); };
      const std::string kcol =
          sw.longrun ? std::string("longrun") : std::to_string(sw.k[static_cast<std::size_t>(ug - 1)]);
      os << kSweepSchema << ',' << to_string(sw.axis) << ',' << detail::fmt(value) << ',' << to_string(sw.discipline)
         << ',' << ug << ',' << r.i << ',' << kcol << ',' << detail::fmt(sw.x[static_cast<std::size_t>(ug - 1)]) << ','
         << (r.mc ? detail::fmt(r.mc->p_hat) : "") << ',' << (r.mc ? detail::fmt(r.mc->ci_low) : "") << ','
         << (r.mc ? detail::fmt(r.mc->ci_high) : "") << ',' << opt(r.ub_prob) << ',' << opt(r.lb_prob) << ','
         << opt(r.ub_exp) << ',' << opt(r.lb_exp) << ',' << (r.rr ? detail::fmt(r.rr->p_hat) : "") << ','
         << r.flags << '\n';
    }
    os.flush();
  }
}

}  // namespace aoi
