#pragma once

// Monte Carlo estimates of Pr(A_{g,i}(k) >= n x) by independent
// replications, and of the long-run violation fraction along one trajectory.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include "aoi_grr/error.hpp"
#include "aoi_grr/model.hpp"
#include "aoi_grr/schedule.hpp"
#include "aoi_grr/sim.hpp"

namespace aoi {

struct McEstimate {
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::int64_t reps = 0;
  std::int64_t violations = 0;
  bool below_resolution = false;  // no violation seen; ci_high is the rule-of-three bound
};

inline constexpr double kZ99 = 2.5758293035489;

inline McEstimate wilson_estimate(std::int64_t violations, std::int64_t reps, double z = kZ99) {
  McEstimate e;
  e.reps = reps;
  e.violations = violations;
  const double nr = static_cast<double>(reps);
  e.p_hat = static_cast<double>(violations) / nr;
  const double z2 = z * z;
  const double centre = (e.p_hat + z2 / (2 * nr)) / (1 + z2 / nr);
  const double half = z / (1 + z2 / nr) * std::sqrt(e.p_hat * (1 - e.p_hat) / nr + z2 / (4 * nr * nr));
  e.ci_low = std::max(0.0, centre - half);
  e.ci_high = std::min(1.0, centre + half);
  if (violations == 0) {
    e.ci_low = 0.0;
    e.ci_high = std::min(1.0, 5.3 / nr);
    e.below_resolution = true;
  }
  if (violations == reps) e.ci_high = 1.0;
  e.ci_low = std::min(e.ci_low, e.p_hat);
  e.ci_high = std::max(e.ci_high, e.p_hat);
  return e;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of replication `rep`: a function of (base_seed, rep) only.
inline std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t rep) {
  return splitmix64(splitmix64(base_seed) ^ (rep * 0xD1B54A32D192ED03ULL + 1));
}

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Runs body(rep, counts) for rep in [0, reps) on `threads` workers and sums
/// the per-worker integer counts, so the total is independent of how the
/// replications were distributed.
template <class Body>
std::vector<std::int64_t> parallel_count(std::int64_t reps, std::size_t width, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::int64_t>(reps, 1))));
  std::vector<std::vector<std::int64_t>> partial(threads, std::vector<std::int64_t>(width, 0));
  std::atomic<std::int64_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](unsigned w) {
    try {
      constexpr std::int64_t chunk = 64;
      for (;;) {
        const std::int64_t lo = next.fetch_add(chunk);
        if (lo >= reps) break;
        const std::int64_t hi = std::min(reps, lo + chunk);
        for (std::int64_t rep = lo; rep < hi; ++rep) body(rep, partial[w]);
      }
    } catch (...) {
      errors[w] = std::current_exception();
      next.store(reps);
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<std::int64_t> total(width, 0);
  for (const auto& p : partial)
    for (std::size_t j = 0; j < width; ++j) total[j] += p[j];
  return total;
}

struct ViolationQuery {
  SourceId source;
  std::int64_t k = 1;
  double x = 0.0;  // violation when A >= n x
};

/// Several queries answered from the same replications: each replication
/// runs until every queried update has been delivered. Estimates for
/// different queries are therefore correlated but each is unbiased.
/// `sched` defaults to the GRR schedule; pass the RR schedule for baselines.
inline std::vector<McEstimate> estimate_violations(const SystemSpec& spec_in, Discipline discipline,
                                                   const std::vector<ViolationQuery>& queries, std::int64_t reps,
                                                   std::uint64_t base_seed, unsigned threads = default_threads(),
                                                   const IterationSchedule* sched_override = nullptr) {
  if (reps < 1) throw Error(ErrorCode::NonPositiveParameter, "reps must be >= 1");
  const SystemSpec spec = validate_and_normalize(spec_in);
  const IterationSchedule sched = sched_override ? *sched_override : build_schedule(spec);
  std::int64_t max_round = 0;
  for (const auto& q : queries) {
    check_source(spec, q.source);
    if (q.k < 1) throw Error(ErrorCode::KTooSmall, "k must be >= 1");
    max_round = std::max(max_round, service_round(spec, q.source, q.k));
  }
  // RR serves every source every round, so GRR's service round is an upper
  // bound for both schedules; one spare iteration guards the edge.
  const std::int64_t limit = max_round + 1 + sched.d_tilde;
  const double n = static_cast<double>(spec.scale_n());
  // Deterministic service makes every replication identical: one run decides
  // each indicator exactly.
  const bool exact = std::holds_alternative<Deterministic>(spec.service);

  const auto counts = parallel_count(exact ? 1 : reps, queries.size(), threads, [&](std::int64_t rep, std::vector<std::int64_t>& c) {
    Rng rng(replication_seed(base_seed, static_cast<std::uint64_t>(rep)));
    ServerWalk walk(spec, sched, discipline);
    std::size_t remaining = queries.size();
    std::vector<char> done(queries.size(), 0);
    walk.run(limit, rng, [&](SourceId s, const PeakAgeRecord& rec) {
      for (std::size_t j = 0; j < queries.size(); ++j) {
        if (done[j] || !(queries[j].source == s) || queries[j].k != rec.k) continue;
        done[j] = 1;
        --remaining;
        if (rec.A >= n * queries[j].x) ++c[j];
      }
      return remaining > 0;
    });
    if (remaining > 0) throw Error(ErrorCode::HorizonTooShort, "queried update not delivered");
  });

  std::vector<McEstimate> out;
  out.reserve(queries.size());
  for (auto v : counts) {
    if (exact) {
      McEstimate e;
      e.reps = reps;
      e.violations = v * reps;
      e.p_hat = e.ci_low = e.ci_high = static_cast<double>(v);
      out.push_back(e);
    } else {
      out.push_back(wilson_estimate(v, reps));
    }
  }
  return out;
}

inline McEstimate estimate_violation(const SystemSpec& spec, Discipline discipline, SourceId s, std::int64_t k,
                                     double x, std::int64_t reps, std::uint64_t base_seed,
                                     unsigned threads = default_threads()) {
  return estimate_violations(spec, discipline, {ViolationQuery{s, k, x}}, reps, base_seed, threads).front();
}

inline constexpr int kBatches = 20;
inline constexpr double kT99Df19 = 2.861;  // two-sided 99% Student t, 19 df

/// Fraction of updates of s with A >= n x over one trajectory of
/// `iterations` iterations, the first iteration excluded. The interval comes
/// from 20 batch means.
inline McEstimate estimate_longrun_fraction(const SystemSpec& spec_in, Discipline discipline, SourceId s, double x,
                                            std::int64_t iterations, std::uint64_t seed,
                                            const IterationSchedule* sched_override = nullptr) {
  const SystemSpec spec = validate_and_normalize(spec_in);
  check_source(spec, s);
  const IterationSchedule sched = sched_override ? *sched_override : build_schedule(spec);
  const IterationSchedule grr = build_schedule(spec);
  const double n = static_cast<double>(spec.scale_n());

  std::vector<char> hits;
  Rng rng(seed);
  ServerWalk walk(spec, sched, discipline);
  walk.run(iterations * grr.d_tilde, rng, [&](SourceId src, const PeakAgeRecord& rec) {
    if (src == s && rec.round >= grr.d_tilde) hits.push_back(rec.A >= n * x ? 1 : 0);
    return true;
  });
  const auto count = static_cast<std::int64_t>(hits.size());
  if (count < 1000) throw Error(ErrorCode::HorizonTooShort, "long-run estimate needs >= 1000 updates");

  std::int64_t violations = 0;
  for (char h : hits) violations += h;
  McEstimate e;
  e.reps = count;
  e.violations = violations;
  e.p_hat = static_cast<double>(violations) / static_cast<double>(count);

  const std::int64_t per = count / kBatches;
  double sum = 0.0, sum2 = 0.0;
  for (int bi = 0; bi < kBatches; ++bi) {
    std::int64_t v = 0;
    for (std::int64_t j = bi * per; j < (bi + 1) * per; ++j) v += hits[static_cast<std::size_t>(j)];
    const double f = static_cast<double>(v) / static_cast<double>(per);
    sum += f;
    sum2 += f * f;
  }
  const double mu = sum / kBatches;
  const double var = std::max(0.0, (sum2 - kBatches * mu * mu) / (kBatches - 1));
  const double half = kT99Df19 * std::sqrt(var / kBatches);
  e.ci_low = std::max(0.0, std::min(e.p_hat, e.p_hat - half));
  e.ci_high = std::min(1.0, std::max(e.p_hat, e.p_hat + half));
  if (violations == 0) {
    e.ci_high = std::min(1.0, 5.3 / static_cast<double>(count));
    e.below_resolution = true;
  }
  return e;
}

}  // namespace aoi
