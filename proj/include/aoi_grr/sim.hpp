#pragma once

// Single-server simulation of a GRR-scheduled system with synchronized
// periodic batch arrivals.
//
// The server walks the static schedule slot by slot. At each slot it serves
// one packet of the scheduled source, idling until that source's next
// arrival when nothing is waiting:
//   IPQ - unbounded FCFS queue, so the slot serves the oldest packet;
//   SPQ - single buffer holding the freshest arrival; older queued packets
//         are discarded. A packet in service always completes.
// The next slot is never served ahead of the current one.

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <vector>

#include "aoi_grr/dist.hpp"
#include "aoi_grr/error.hpp"
#include "aoi_grr/model.hpp"
#include "aoi_grr/schedule.hpp"

namespace aoi {

enum class Discipline { IPQ, SPQ };

constexpr const char* to_string(Discipline d) { return d == Discipline::IPQ ? "ipq" : "spq"; }

/// One delivered packet.
struct PeakAgeRecord {
  std::int64_t k = 0;       // delivered-update index of this source (1-based)
  std::int64_t round = 0;   // global round of the service slot
  double S = 0.0;           // arrival of the delivered packet
  double S_prev = 0.0;      // arrival of the previously delivered packet
  double D = 0.0;           // departure
  double A = 0.0;           // peak age D - S_prev
  double W = 0.0;           // waiting time
  double V = 0.0;           // service time
  std::int64_t preempted = 0;  // own packets discarded since the previous delivery (SPQ)
  double T = 0.0;  // busy time from the previous service start to this one
  double N = 0.0;  // idle time over the same span
  bool warmup = false;  // served in the first iteration
};

// The first delivery of every source is measured from a notional update
// generated one period before time zero, so S_prev = -d_g n b at k = 1 and
// T, N are left at zero there.

struct SimRun {
  SystemSpec spec;
  Discipline discipline = Discipline::IPQ;
  std::int64_t horizon = 1;  // iterations (d~ rounds each)
  std::uint64_t seed = 0;
};

struct PeakAgeTrace {
  SystemSpec spec;
  Discipline discipline = Discipline::IPQ;
  std::int64_t rounds = 0;
  std::int64_t warmup_rounds = 0;
  std::vector<SourceId> sources;                   // flat order: groups ascending, then i
  std::vector<std::vector<PeakAgeRecord>> per_source;

  const std::vector<PeakAgeRecord>& records(SourceId s) const { return per_source[flat_index(spec, s)]; }

  static std::size_t flat_index(const SystemSpec& spec, SourceId s) {
    std::size_t idx = 0;
    for (int g = 1; g < s.g; ++g) idx += static_cast<std::size_t>(spec.group(g).count);
    return idx + static_cast<std::size_t>(s.i - 1);
  }
};

namespace detail {

/// Arrival time of packet a (1-based) of a group with multiplier d_g. Every
/// timestamp derives from round_time so batch simultaneity is exact.
inline double packet_arrival(const SystemSpec& spec, std::int64_t d_g, std::int64_t a) {
  return spec.round_time(d_g * (a - 1));
}

/// Index of the freshest packet that has arrived by time t.
inline std::int64_t latest_packet(const SystemSpec& spec, std::int64_t d_g, double t) {
  const double period = spec.round_time(d_g);
  auto a = static_cast<std::int64_t>(std::floor(t / period)) + 1;
  if (a < 1) a = 1;
  while (packet_arrival(spec, d_g, a + 1) <= t) ++a;
  while (a > 1 && packet_arrival(spec, d_g, a) > t) --a;
  return a;
}

/// Running sum with a compensation term. Long overloaded runs otherwise
/// drift by ~1e-9 once the clock reaches 1e5 with a fixed service time.
struct CompensatedSum {
  double hi = 0.0;
  double lo = 0.0;
  void add(double v) {
    const double t = hi + v;
    lo += std::abs(hi) >= std::abs(v) ? (hi - t) + v : (v - t) + hi;
    hi = t;
  }
  void set(double v) { hi = v, lo = 0.0; }
  double value() const { return hi + lo; }
  double since(const CompensatedSum& earlier) const { return (hi - earlier.hi) + (lo - earlier.lo); }
};

}  // namespace detail

/// Event-level engine shared by traces, Monte Carlo and baselines. Calls
/// sink(source, record) after each service; the walk stops when the sink
/// returns false or after `num_rounds` rounds.
class ServerWalk {
 public:
  ServerWalk(const SystemSpec& spec, const IterationSchedule& sched, Discipline discipline)
      : spec_(spec), sched_(sched), discipline_(discipline) {
    std::size_t total = 0;
    for (const auto& grp : spec.groups) total += static_cast<std::size_t>(grp.count);
    state_.assign(total, SourceState{});
  }

  template <class Sink>
  void run(std::int64_t num_rounds, Rng& rng, Sink&& sink) {
    for (std::int64_t r = round_; r < num_rounds; ++r, ++round_) {
      for (const auto& s : sched_.round(r)) {
        if (!serve(s, r, rng, sink)) {
          ++round_;
          return;
        }
      }
    }
  }

  double now() const { return clock_.value(); }

 private:
  struct SourceState {
    std::int64_t delivered = 0;     // services so far
    std::int64_t last_packet = 0;   // index of the last delivered packet
    double last_arrival = 0.0;
    detail::CompensatedSum busy_at_start;
    detail::CompensatedSum idle_at_start;
  };

  template <class Sink>
  bool serve(SourceId s, std::int64_t r, Rng& rng, Sink& sink) {
    auto& st = state_[PeakAgeTrace::flat_index(spec_, s)];
    const std::int64_t d_g = spec_.group(s.g).d;

    std::int64_t packet;
    std::int64_t dropped = 0;
    if (discipline_ == Discipline::IPQ) {
      packet = st.last_packet + 1;
    } else {
      const std::int64_t latest = detail::latest_packet(spec_, d_g, now());
      if (latest > st.last_packet) {
        packet = latest;
        dropped = latest - st.last_packet - 1;
      } else {
        packet = st.last_packet + 1;
      }
    }
    const double arrival = detail::packet_arrival(spec_, d_g, packet);
    if (arrival > now()) {
      idle_.add(arrival - now());
      clock_.set(arrival);
    }

    const double v = spec_.is_virtual(s) ? 0.0 : sample(spec_.service, rng);
    PeakAgeRecord rec;
    rec.k = st.delivered + 1;
    rec.round = r;
    rec.S = arrival;
    rec.S_prev = rec.k == 1 ? detail::packet_arrival(spec_, d_g, 0) : st.last_arrival;
    rec.W = now() - arrival;
    rec.V = v;
    auto done = clock_;
    done.add(v);
    rec.D = done.value();
    rec.A = rec.D - rec.S_prev;
    rec.preempted = dropped;
    if (rec.k > 1) {
      rec.T = busy_.since(st.busy_at_start);
      rec.N = idle_.since(st.idle_at_start);
    }
    rec.warmup = r < sched_.d_tilde;

    st.delivered = rec.k;
    st.last_packet = packet;
    st.last_arrival = arrival;
    st.busy_at_start = busy_;
    st.idle_at_start = idle_;
    clock_ = done;
    busy_.add(v);
    return sink(s, rec);
  }

  const SystemSpec& spec_;
  const IterationSchedule& sched_;
  Discipline discipline_;
  std::vector<SourceState> state_;
  std::int64_t round_ = 0;
  detail::CompensatedSum clock_;
  detail::CompensatedSum busy_;
  detail::CompensatedSum idle_;
};

inline PeakAgeTrace run_with_schedule(const SimRun& run, const IterationSchedule& sched) {
  if (run.horizon < 1) throw Error(ErrorCode::HorizonTooShort, "horizon must be >= 1 iteration");
  PeakAgeTrace trace;
  trace.spec = run.spec;
  trace.discipline = run.discipline;
  trace.rounds = run.horizon * sched.d_tilde;
  trace.warmup_rounds = sched.d_tilde;
  for (int g = 1; g <= run.spec.num_groups(); ++g)
    for (std::int64_t i = 1; i <= run.spec.group(g).count; ++i)
      trace.sources.push_back(SourceId{g, static_cast<int>(i)});
  trace.per_source.resize(trace.sources.size());

  Rng rng(run.seed);
  ServerWalk walk(trace.spec, sched, run.discipline);
  walk.run(trace.rounds, rng, [&](SourceId s, const PeakAgeRecord& rec) {
    trace.per_source[PeakAgeTrace::flat_index(trace.spec, s)].push_back(rec);
    return true;
  });
  for (std::size_t idx = 0; idx < trace.sources.size(); ++idx)
    if (trace.per_source[idx].empty())
      throw Error(ErrorCode::HorizonTooShort, "a source received no service within the horizon");
  return trace;
}

inline PeakAgeTrace run_ipq(SimRun run) {
  run.spec = validate_and_normalize(run.spec);
  run.discipline = Discipline::IPQ;
  return run_with_schedule(run, build_schedule(run.spec));
}

inline PeakAgeTrace run_spq(SimRun run) {
  run.spec = validate_and_normalize(run.spec);
  run.discipline = Discipline::SPQ;
  return run_with_schedule(run, build_schedule(run.spec));
}

inline PeakAgeTrace simulate(const SimRun& run) {
  return run.discipline == Discipline::IPQ ? run_ipq(run) : run_spq(run);
}

struct WaitingSeries {
  SourceId source;
  std::vector<double> W;
};

inline std::vector<WaitingSeries> trace_waiting_times(const PeakAgeTrace& trace) {
  std::vector<WaitingSeries> out;
  out.reserve(trace.sources.size());
  for (std::size_t idx = 0; idx < trace.sources.size(); ++idx) {
    WaitingSeries ws{trace.sources[idx], {}};
    ws.W.reserve(trace.per_source[idx].size());
    for (const auto& rec : trace.per_source[idx]) ws.W.push_back(rec.W);
    out.push_back(std::move(ws));
  }
  return out;
}

/// Trace CSV: g,i,k,S_prev,D,A,W,V,preempted (virtual sources omitted,
/// user-facing group numbering).
inline void write_trace_csv(std::ostream& os, const PeakAgeTrace& trace) {
  const auto old_prec = os.precision(std::numeric_limits<double>::max_digits10);
  os << "g,i,k,S_prev,D,A,W,V,preempted\n";
  for (std::size_t idx = 0; idx < trace.sources.size(); ++idx) {
    const auto s = trace.sources[idx];
    if (trace.spec.is_virtual(s)) continue;
    for (const auto& rec : trace.per_source[idx])
      os << trace.spec.user_group(s.g) << ',' << s.i << ',' << rec.k << ',' << rec.S_prev << ',' << rec.D << ','
         << rec.A << ',' << rec.W << ',' << rec.V << ',' << rec.preempted << '\n';
  }
  os.precision(old_prec);
}

}  // namespace aoi
