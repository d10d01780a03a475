// Acceptance run: one PASS/FAIL line per criterion, diagnostics indented
// below it. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aoi_grr/bounds_ipq.hpp"
#include "aoi_grr/bounds_spq.hpp"
#include "aoi_grr/mc.hpp"
#include "aoi_grr/rate.hpp"
#include "aoi_grr/schedule.hpp"
#include "aoi_grr/sim.hpp"
#include "oracles.hpp"

using namespace aoi;

namespace {

constexpr double kTol = 1e-9;

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;
  void fail(const std::string& why) {
    pass = false;
    notes.push_back("FAIL: " + why);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

SystemSpec preset(std::int64_t per_group, double b, ServiceLaw law) {
  SystemSpec s;
  s.groups = {{1, per_group, false}, {2, per_group, false}, {4, per_group, false}};
  s.b = b;
  s.service = law;
  s.n_scaling = NScaling::TotalSources;
  return s;
}

const std::vector<double> kIpqX{8, 14, 25};
const std::vector<double> kSpqX{13.5, 21, 36};
const std::vector<std::int64_t> kDs{1, 2, 4};
const std::vector<std::int64_t> kSlopeN{4, 6, 8, 10, 12};

// Least-squares slope of ys against xs.
double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    sx += xs[j];
    sy += ys[j];
    sxx += xs[j] * xs[j];
    sxy += xs[j] * ys[j];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// Random corpus shared by criteria 1 and 2: laws cycle so each appears.
std::vector<SystemSpec> corpus() {
  std::mt19937_64 rng(20240917);
  std::vector<SystemSpec> out;
  for (int c = 0; out.size() < 50; ++c) {
    auto spec = oracle::random_spec(rng);
    const double mu = mean(spec.service);
    switch (c % 3) {
      case 0: spec.service = Exponential{1.0 / mu}; break;
      case 1: spec.service = Geometric{std::min(0.95, 1.0 / mu)}; break;
      default: spec.service = Deterministic{mu}; break;
    }
    out.push_back(spec);
  }
  return out;
}

std::int64_t horizon_for(const SystemSpec& spec_in, std::int64_t records) {
  const auto spec = validate_and_normalize(spec_in);
  const auto sched = build_schedule(spec);
  std::int64_t per_iter = 0;
  for (int g = 1; g <= spec.num_groups(); ++g)
    if (!spec.group(g).is_virtual) per_iter += spec.group(g).count * (sched.d_tilde / spec.group(g).d);
  return records / per_iter + 2;
}

std::size_t real_records(const PeakAgeTrace& t) {
  std::size_t n = 0;
  for (std::size_t idx = 0; idx < t.sources.size(); ++idx)
    if (!t.spec.is_virtual(t.sources[idx])) n += t.per_source[idx].size();
  return n;
}

Verdict crit1() {
  Verdict v;
  std::size_t checked = 0, min_records = SIZE_MAX;
  double worst = 0.0;
  int spec_no = 0;
  for (const auto& spec : corpus()) {
    const auto trace = run_ipq({spec, Discipline::IPQ, horizon_for(spec, 10000), 1000u + static_cast<unsigned>(spec_no)});
    min_records = std::min(min_records, real_records(trace));
    for (std::size_t idx = 0; idx < trace.sources.size(); ++idx) {
      const auto s = trace.sources[idx];
      const auto expect = oracle::lemma2_peak_ages(trace, s.g, s.i);
      for (const auto& rec : trace.per_source[idx]) {
        const double err = std::abs(rec.A - expect.at({s.i, rec.k}));
        worst = std::max(worst, err);
        ++checked;
      }
    }
    ++spec_no;
  }
  v.note(fmt("%zu peak ages over 50 specs, min %zu records/spec, max |error| %.3g", checked, min_records, worst));
  if (min_records < 10000) v.fail("fewer than 1e4 records in some spec");
  if (worst > kTol) v.fail("oracle mismatch above 1e-9");
  return v;
}

Verdict crit2() {
  Verdict v;
  double worst1 = 0.0, worst3 = 0.0;
  std::size_t n1 = 0, n3 = 0;
  int spec_no = 0;
  for (const auto& spec : corpus()) {
    const auto h = horizon_for(spec, 10000);
    const auto ipq = run_ipq({spec, Discipline::IPQ, h, 2000u + static_cast<unsigned>(spec_no)});
    std::vector<double> round_total(static_cast<std::size_t>(ipq.rounds), 0.0);
    for (const auto& recs : ipq.per_source)
      for (const auto& rec : recs) round_total[static_cast<std::size_t>(rec.round)] += rec.V;
    const double nb = ipq.spec.round_time(1);
    // Source (1,1) after normalization: served every round (it is the
    // zero-length virtual source when the first configured d exceeds 1).
    const auto& lead = ipq.records({1, 1});
    worst1 = std::max(worst1, std::abs(lead.front().W));
    for (std::size_t k = 1; k < lead.size(); ++k, ++n1)
      worst1 = std::max(worst1, std::abs(lead[k].W - std::max(0.0, lead[k - 1].W + round_total[k - 1] - nb)));

    const auto spq = run_spq({spec, Discipline::SPQ, h, 3000u + static_cast<unsigned>(spec_no)});
    for (std::size_t idx = 0; idx < spq.sources.size(); ++idx) {
      const double period = spq.spec.period(spq.sources[idx].g);
      const auto& recs = spq.per_source[idx];
      for (std::size_t k = 1; k < recs.size(); ++k, ++n3) {
        const double rhs =
            recs[k - 1].W + recs[k].T + recs[k].N - static_cast<double>(recs[k].preempted + 1) * period;
        worst3 = std::max(worst3, std::abs(recs[k].W - rhs));
      }
    }
    ++spec_no;
  }
  v.note(fmt("leading-source recursion: %zu steps, max |error| %.3g", n1, worst1));
  v.note(fmt("SPQ waiting identity: %zu steps, max |error| %.3g", n3, worst3));
  if (n1 == 0) v.fail("no leading-source steps checked");
  if (worst1 > kTol || worst3 > kTol) v.fail("identity error above 1e-9");
  return v;
}

struct GridPoint {
  const char* label;
  std::int64_t round;  // -1 means k = 1
};

std::int64_t k_at(std::int64_t d, std::int64_t round) { return round < 0 ? 1 : round / d + 1; }

Verdict crit3() {
  Verdict v;
  const std::vector<GridPoint> points{{"k=1", -1}, {"R=4", 4}, {"R=16", 16}};
  for (auto disc : {Discipline::IPQ, Discipline::SPQ}) {
    const bool ipq = disc == Discipline::IPQ;
    const auto& xs = ipq ? kIpqX : kSpqX;
    for (std::int64_t ng : {6, 12, 24}) {
      const auto spec =
          validate_and_normalize(preset(ng, 5.0, ipq ? ServiceLaw{Exponential{1.0 / 3.0}} : ServiceLaw{Exponential{0.2}}));
      const auto sched = build_schedule(spec);
      std::vector<ViolationQuery> qs;
      std::vector<std::string> labels;
      for (int ug = 1; ug <= 3; ++ug)
        for (const auto& p : points) {
          if (!ipq && p.round < 0) continue;  // SPQ bounds start at k = 2
          const SourceId s{spec.internal_group(ug), static_cast<int>(ng)};
          qs.push_back({s, k_at(kDs[static_cast<std::size_t>(ug - 1)], p.round), xs[static_cast<std::size_t>(ug - 1)]});
          labels.push_back(fmt("g%d %s", ug, p.label));
        }
      const auto est = estimate_violations(spec, disc, qs, 100000, 77u + static_cast<unsigned>(ng));
      std::string line = fmt("%s n_g=%lld:", to_string(disc), static_cast<long long>(ng));
      for (std::size_t j = 0; j < qs.size(); ++j) {
        const auto& q = qs[j];
        const auto& e = est[j];
        double ub, lb = -1.0;
        if (ipq) {
          ub = theorem1_upper(spec, sched, q.source, q.k, q.x).probability;
          lb = theorem2_lower(spec, sched, q.source, q.k, q.x, 0.0).probability;
        } else {
          ub = theorem3_upper(spec, sched, SpqBoundQuery{q.source, q.k, q.x}).probability;
        }
        line += fmt(" [%s p=%.3g ub=%.3g%s]", labels[j].c_str(), e.p_hat, ub,
                    lb >= 0 ? fmt(" lb=%.3g", lb).c_str() : "");
        if (e.ci_low > ub) v.fail(fmt("%s n_g=%lld %s: p_hat %.4g above UB %.4g", to_string(disc),
                                      static_cast<long long>(ng), labels[j].c_str(), e.p_hat, ub));
        if (lb >= 0 && e.ci_high < lb) {
          const auto msg = fmt("%s n_g=%lld %s: p_hat %.4g below LB %.4g", to_string(disc), static_cast<long long>(ng),
                               labels[j].c_str(), e.p_hat, lb);
          if (ng == 24) v.fail(msg);
          else v.note("reported (small n): " + msg);
        }
      }
      v.note(line);
    }
  }
  return v;
}

struct SlopeResult {
  std::vector<double> mc_slope, bound_slope;
  std::vector<int> points;
};

// Slope of log p_hat against n_g for the last source of each group.
SlopeResult slopes(Discipline disc, ServiceLaw law, const std::vector<double>& xs, std::int64_t round,
                   std::int64_t reps, std::uint64_t seed, Verdict& v, const char* tag) {
  SlopeResult out;
  std::vector<std::vector<double>> nx(3), ny(3), bx(3), by(3);
  for (auto ng : kSlopeN) {
    const auto spec = validate_and_normalize(preset(ng, 5.0, law));
    const auto sched = build_schedule(spec);
    std::vector<ViolationQuery> qs;
    for (int ug = 1; ug <= 3; ++ug)
      qs.push_back({SourceId{spec.internal_group(ug), static_cast<int>(ng)},
                    k_at(kDs[static_cast<std::size_t>(ug - 1)], round), xs[static_cast<std::size_t>(ug - 1)]});
    const auto est = estimate_violations(spec, disc, qs, reps, seed + static_cast<std::uint64_t>(ng));
    std::string line = fmt("%s n_g=%lld:", tag, static_cast<long long>(ng));
    for (std::size_t j = 0; j < 3; ++j) {
      const auto& q = qs[j];
      const double expo = disc == Discipline::IPQ
                              ? theorem1_upper(spec, sched, q.source, q.k, q.x).exponent
                              : theorem3_upper(spec, sched, SpqBoundQuery{q.source, q.k, q.x}).exponent;
      bx[j].push_back(static_cast<double>(ng));
      by[j].push_back(-static_cast<double>(spec.scale_n()) * expo);
      if (est[j].violations > 0) {
        nx[j].push_back(static_cast<double>(ng));
        ny[j].push_back(std::log(est[j].p_hat));
      }
      line += fmt(" g%zu p=%.4g (%lld hits) exponent=%.4g", j + 1, est[j].p_hat,
                  static_cast<long long>(est[j].violations), expo);
    }
    v.note(line);
  }
  for (std::size_t j = 0; j < 3; ++j) {
    out.points.push_back(static_cast<int>(nx[j].size()));
    out.mc_slope.push_back(nx[j].size() >= 3 ? ls_slope(nx[j], ny[j]) : std::nan(""));
    out.bound_slope.push_back(ls_slope(bx[j], by[j]));
  }
  return out;
}

void compare_slopes(const SlopeResult& r, double tol, Verdict& v, const char* what) {
  for (std::size_t j = 0; j < 3; ++j) {
    if (r.points[j] < 3) {
      v.fail(fmt("g%zu: only %d points with violations, slope undefined", j + 1, r.points[j]));
      continue;
    }
    const double rel = std::abs(r.mc_slope[j] - r.bound_slope[j]) / std::abs(r.bound_slope[j]);
    const auto msg = fmt("g%zu: MC slope %.4f, %s slope %.4f, rel diff %.3f", j + 1, r.mc_slope[j], what,
                         r.bound_slope[j], rel);
    if (!(rel <= tol)) v.fail(msg);
    else v.note(msg);
  }
}

Verdict crit4() {
  Verdict v;
  const auto r = slopes(Discipline::IPQ, Exponential{1.0 / 3.0}, kIpqX, -1, 1000000, 4000, v, "k=1");
  compare_slopes(r, 0.20, v, "analytic");

  // Steady-state diagnostic at global round 16: the minimum over ell' is
  // attained by a vacuous term, so the analytic slope there is zero.
  Verdict diag;
  const auto d = slopes(Discipline::IPQ, Exponential{1.0 / 3.0}, kIpqX, 16, 100000, 4100, diag, "diag R=16");
  for (const auto& n : diag.notes) v.note("diagnostic " + n);
  for (std::size_t j = 0; j < 3; ++j)
    v.note(fmt("diagnostic R=16 g%zu: MC slope %s, analytic slope %.4f", j + 1,
               d.points[j] >= 3 ? fmt("%.4f", d.mc_slope[j]).c_str() : "n/a (too few hits)", d.bound_slope[j]));
  return v;
}

Verdict crit5() {
  Verdict v;
  const auto r = slopes(Discipline::SPQ, Exponential{0.2}, kSpqX, 16, 1000000, 5000, v, "spq R=16");
  compare_slopes(r, 0.20, v, "Theorem-3");

  const auto spec = validate_and_normalize(preset(10, 5.0, Exponential{0.2}));
  std::vector<ViolationQuery> qs;
  for (int ug = 1; ug <= 3; ++ug)
    qs.push_back({SourceId{spec.internal_group(ug), 10}, k_at(kDs[static_cast<std::size_t>(ug - 1)], 16),
                  kSpqX[static_cast<std::size_t>(ug - 1)]});
  const auto est = estimate_violations(spec, Discipline::IPQ, qs, 100000, 5100);
  for (std::size_t j = 0; j < 3; ++j) {
    const auto msg = fmt("IPQ saturation g%zu (n_g=10, R=16): p_hat %.4g", j + 1, est[j].p_hat);
    if (est[j].p_hat != 1.0) v.fail(msg + ", expected 1");
    else v.note(msg);
  }

  // Diagnostic only: with n read as the group size the same config is
  // overloaded, which is where saturation comes from.
  auto per_group = preset(10, 5.0, Exponential{0.2});
  per_group.n_scaling = NScaling::PerGroupSize;
  per_group = validate_and_normalize(per_group);
  const auto sat = estimate_violations(per_group, Discipline::IPQ, qs, 100000, 5200);
  v.note(fmt("diagnostic, n = group size: IPQ p_hat %.4g %.4g %.4g", sat[0].p_hat, sat[1].p_hat, sat[2].p_hat));
  return v;
}

Verdict crit6() {
  Verdict v;
  // (a) homogeneous upper and lower exponents
  double worst_a = 0.0;
  int cases = 0;
  for (std::int64_t n : {1, 4, 10, 25})
    for (double x : {6.0, 9.0, 15.0})
      for (std::int64_t k : {1, 2, 5, 12})
        for (ServiceLaw law : {ServiceLaw{Exponential{1.0}}, ServiceLaw{Geometric{0.6}}, ServiceLaw{Deterministic{1.5}}}) {
          const auto hb = homogeneous_bounds(n, 4.0, law, n, k, x);
          worst_a = std::max(worst_a, std::abs(hb.upper.exponent - hb.lower.exponent));
          ++cases;
        }
  v.note(fmt("(a) %d cases, max |UB - LB exponent| %.3g", cases, worst_a));
  if (worst_a > kTol) v.fail("(a) homogeneous exponents differ");

  // (b) SPQ many-source exponent vs the IPQ ell'=0 term
  double worst_b = 0.0;
  for (std::int64_t n : {2, 5, 20})
    for (double x : {12.0, 20.0, 40.0}) {
      SystemSpec spec;
      spec.groups = {{1, n, false}};
      spec.b = 5.0;
      spec.service = Exponential{1.0};
      spec = validate_and_normalize(spec);
      const auto sched = build_schedule(spec);
      const double spq = corollary6_asymptotic(spec, sched, SpqBoundQuery{SourceId{1, static_cast<int>(n)}, 2, x});
      const double ipq0 = homogeneous_bounds(n, 5.0, Exponential{1.0}, n, 1, x).upper.gammas.front();
      const double closed = (x - 5.0) - 1.0 - std::log(x - 5.0);  // lambda = 1, unit coefficient
      worst_b = std::max({worst_b, std::abs(spq - ipq0), std::abs(spq - closed)});
    }
  v.note(fmt("(b) max |SPQ - IPQ ell'=0| (and closed form) %.3g", worst_b));
  if (worst_b > kTol) v.fail("(b) exponents differ");

  // (c) GRR with one group against an independently coded RR
  double worst_c = 0.0;
  std::size_t events = 0;
  bool order_ok = true;
  for (bool spq : {false, true})
    for (int n : {1, 3, 6}) {
      SystemSpec spec;
      spec.groups = {{1, n, false}};
      spec.b = 1.0;
      spec.service = Exponential{1.0 / 0.9};
      const auto trace = simulate({spec, spq ? Discipline::SPQ : Discipline::IPQ, 500, 99u + static_cast<unsigned>(n)});
      std::vector<std::tuple<std::int64_t, int, PeakAgeRecord>> order;
      for (std::size_t idx = 0; idx < trace.sources.size(); ++idx)
        for (const auto& rec : trace.per_source[idx]) order.emplace_back(rec.round, trace.sources[idx].i, rec);
      std::sort(order.begin(), order.end(), [](const auto& a, const auto& c) {
        return std::get<0>(a) != std::get<0>(c) ? std::get<0>(a) < std::get<0>(c) : std::get<1>(a) < std::get<1>(c);
      });
      std::vector<double> services;
      for (const auto& o : order) services.push_back(std::get<2>(o).V);
      const auto ref = oracle::rr_homogeneous(n, spec.b, services, spq);
      if (ref.size() != order.size()) order_ok = false;
      for (std::size_t j = 0; j < std::min(ref.size(), order.size()); ++j, ++events) {
        const auto& rec = std::get<2>(order[j]);
        if (ref[j].i != std::get<1>(order[j])) order_ok = false;
        worst_c = std::max({worst_c, std::abs(ref[j].start - (rec.D - rec.V)), std::abs(ref[j].departure - rec.D),
                            std::abs(static_cast<double>(ref[j].packet - 1) * n * spec.b - rec.S)});
      }
    }
  v.note(fmt("(c) %zu events, max timing difference %.3g", events, worst_c));
  if (!order_ok || worst_c > kTol) v.fail("(c) GRR and RR traces differ");
  return v;
}

Verdict crit7() {
  Verdict v;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lam(0.05, 5.0), coeff(0.05, 4.0), mult(1.05, 12.0);
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    const double l = lam(rng), a = coeff(rng);
    const double y = a / l * mult(rng);  // lambda y > coeff
    const double numeric = sup_rate(y, a, Exponential{l}).value;
    const double closed = l * y - a - a * std::log(l * y / a);
    worst = std::max(worst, std::abs(numeric - closed));
  }
  v.note(fmt("100 cases, max |numeric - closed form| %.3g", worst));
  if (worst > 1e-8) v.fail("difference above 1e-8");
  return v;
}

Verdict crit8() {
  Verdict v;
  const auto ex = slopes(Discipline::IPQ, Exponential{1.0 / 3.0}, kIpqX, -1, 1000000, 4000, v, "exponential k=1");
  const auto ge = slopes(Discipline::IPQ, Geometric{0.2835}, kIpqX, -1, 1000000, 8000, v, "geometric k=1");
  for (std::size_t j = 0; j < 3; ++j) {
    if (ex.points[j] < 3 || ge.points[j] < 3) {
      v.fail(fmt("g%zu: too few points with violations", j + 1));
      continue;
    }
    const double rel = std::abs(ge.mc_slope[j] - ex.mc_slope[j]) / std::abs(ex.mc_slope[j]);
    const auto msg =
        fmt("g%zu: geometric slope %.4f, exponential slope %.4f, rel diff %.3f", j + 1, ge.mc_slope[j], ex.mc_slope[j], rel);
    if (!(rel <= 0.25)) v.fail(msg);
    else v.note(msg);
  }
  return v;
}

Verdict crit9() {
  Verdict v;
  for (std::int64_t ng : {6, 12, 24}) {
    const auto spec = validate_and_normalize(preset(ng, 5.0, Exponential{1.0 / 3.0}));
    const auto sched = build_schedule(spec);
    std::string line = fmt("n_g=%lld:", static_cast<long long>(ng));
    for (int ug = 1; ug <= 3; ++ug) {
      const SourceId s{spec.internal_group(ug), static_cast<int>(ng)};
      const double x = kIpqX[static_cast<std::size_t>(ug - 1)];
      const auto bound = corollary2_longrun(spec, sched, s, x);
      const auto e = estimate_longrun_fraction(spec, Discipline::IPQ, s, x, 20000, 900u + static_cast<unsigned>(ng));
      line += fmt(" [g%d frac=%.4g ci=(%.3g,%.3g) bound=%.4g]", ug, e.p_hat, e.ci_low, e.ci_high, bound.probability_bound);
      if (e.ci_low > bound.probability_bound)
        v.fail(fmt("n_g=%lld g%d: fraction %.4g above bound %.4g", static_cast<long long>(ng), ug, e.p_hat,
                   bound.probability_bound));
    }
    v.note(line);
  }
  return v;
}

Verdict crit10() {
  Verdict v;
  // x = 60 keeps every approximate exponent positive in both regimes; at
  // x = 30 the small-rate form goes negative for the larger d_g.
  const double x = 60.0;
  struct Case {
    const char* name;
    Regime regime;
    double rate;
  };
  for (const Case& c : {Case{"large rate", Regime::LargeRate, 4.0}, Case{"small rate", Regime::SmallRate, 0.2}}) {
    const auto spec = validate_and_normalize(preset(10, 5.0, Exponential{c.rate}));
    const auto sched = build_schedule(spec);
    for (auto disc : {Discipline::IPQ, Discipline::SPQ})
      for (std::int64_t round : {-1, 16}) {
        std::vector<double> e;
        for (int ug = 1; ug <= 3; ++ug) {
          const SourceId s{spec.internal_group(ug), 10};
          auto k = k_at(kDs[static_cast<std::size_t>(ug - 1)], round);
          if (disc == Discipline::SPQ) k = std::max<std::int64_t>(k, 2);
          e.push_back(disc == Discipline::IPQ ? approx_exponents_ipq(spec, sched, s, k, x, c.regime)
                                              : approx_exponents_spq(spec, sched, SpqBoundQuery{s, k, x}, c.regime));
        }
        const auto msg = fmt("%s %s %s: exponents (d=1,2,4) %.4f %.4f %.4f", c.name, to_string(disc),
                             round < 0 ? "first update" : "R=16", e[0], e[1], e[2]);
        if (e[0] > e[1] && e[1] > e[2]) v.note(msg);
        else v.fail(msg + " not strictly decreasing");
      }
  }
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"peak ages match the recursive peak-age formula (IPQ corpus)", crit1},
      {"waiting-time recursions hold on the corpus", crit2},
      {"Monte Carlo sits inside the analytic bounds", crit3},
      {"IPQ slope agreement, exponential mean 3", crit4},
      {"SPQ slope agreement and IPQ saturation, exponential mean 5", crit5},
      {"homogeneous equalities", crit6},
      {"closed-form rate function vs golden section", crit7},
      {"geometric vs exponential slope parity", crit8},
      {"long-run fraction under the long-run bound", crit9},
      {"exponents decrease with d_g", crit10},
  };
  int failed = 0;
  for (std::size_t j = 0; j < criteria.size(); ++j) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[j].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", j + 1, criteria[j].first, secs);
    for (const auto& n : v.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
