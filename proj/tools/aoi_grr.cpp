// aoi-grr: schedule / simulate / bound / estimate / sweep front-end.
// Exit codes: 0 ok, 2 configuration error, 3 runtime error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "aoi_grr/bounds_ipq.hpp"
#include "aoi_grr/bounds_spq.hpp"
#include "aoi_grr/config.hpp"
#include "aoi_grr/mc.hpp"
#include "aoi_grr/schedule.hpp"
#include "aoi_grr/sim.hpp"
#include "aoi_grr/sweep.hpp"

namespace {

using namespace aoi;

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigError:
    case ErrorCode::EmptyGroups:
    case ErrorCode::DuplicateOrDecreasingD:
    case ErrorCode::NonPositiveParameter:
    case ErrorCode::InconsistentGroupSizes:
    case ErrorCode::InvalidSource:
      return 2;
    default:
      return 3;
  }
}

Discipline parse_discipline(const std::string& s) {
  if (s == "ipq") return Discipline::IPQ;
  if (s == "spq") return Discipline::SPQ;
  throw Error(ErrorCode::ConfigError, "discipline must be ipq or spq");
}

// "g,i" with the user-facing group number.
SourceId parse_source(const SystemSpec& spec, const std::string& text) {
  int g = 0, i = 0;
  char comma = 0;
  std::istringstream is(text);
  if (!(is >> g >> comma >> i) || comma != ',')
    throw Error(ErrorCode::ConfigError, "--source expects g,i");
  if (g < 1 || g > spec.num_user_groups()) throw Error(ErrorCode::InvalidSource, "group out of range");
  SourceId s{spec.internal_group(g), i};
  check_source(spec, s);
  return s;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peak-age violation analysis for generalized round-robin scheduling"};
  app.require_subcommand(1);

  std::string config_path;
  std::string discipline = "ipq";
  std::string source_text;
  std::int64_t k = 2;
  double x = 0.0;
  std::optional<std::uint64_t> seed;
  unsigned threads = default_threads();

  auto* sched_cmd = app.add_subcommand("schedule", "print the iteration schedule");
  std::int64_t rounds = 0;
  sched_cmd->add_option("--config", config_path, "config file")->required();
  sched_cmd->add_option("--rounds", rounds, "rounds to print (default: one iteration)");

  auto* sim_cmd = app.add_subcommand("simulate", "simulate and write a per-packet trace");
  std::int64_t iterations = 100;
  std::string out_path;
  sim_cmd->add_option("--config", config_path)->required();
  sim_cmd->add_option("--discipline", discipline)->check(CLI::IsMember({"ipq", "spq"}));
  sim_cmd->add_option("--iterations", iterations);
  sim_cmd->add_option("--seed", seed);
  sim_cmd->add_option("--out", out_path, "trace CSV (default stdout)");

  auto* bound_cmd = app.add_subcommand("bound", "evaluate the analytic bounds");
  bool limit_n = false;
  double epsilon = 0.0;
  bound_cmd->add_option("--config", config_path)->required();
  bound_cmd->add_option("--discipline", discipline)->check(CLI::IsMember({"ipq", "spq"}));
  bound_cmd->add_option("--source", source_text, "g,i")->required();
  bound_cmd->add_option("--k", k);
  bound_cmd->add_option("--x", x)->required();
  bound_cmd->add_flag("--limit-n", limit_n, "n -> infinity decay rates");
  bound_cmd->add_option("--epsilon", epsilon, "added to the lower-bound exponent");

  auto* est_cmd = app.add_subcommand("estimate", "Monte Carlo violation probability");
  std::int64_t reps = 100000;
  bool longrun = false;
  est_cmd->add_option("--config", config_path)->required();
  est_cmd->add_option("--discipline", discipline)->check(CLI::IsMember({"ipq", "spq"}));
  est_cmd->add_option("--source", source_text, "g,i")->required();
  est_cmd->add_option("--k", k);
  est_cmd->add_option("--x", x)->required();
  est_cmd->add_option("--reps", reps);
  est_cmd->add_option("--seed", seed);
  est_cmd->add_option("--threads", threads);
  est_cmd->add_flag("--longrun", longrun, "time-average fraction over one trajectory");
  est_cmd->add_option("--iterations", iterations, "trajectory length for --longrun");

  auto* sweep_cmd = app.add_subcommand("sweep", "run the sweep block of a config");
  sweep_cmd->add_option("--config", config_path)->required();
  sweep_cmd->add_option("--out", out_path, "CSV (default stdout)");
  sweep_cmd->add_option("--reps", reps, "override sweep reps");
  sweep_cmd->add_option("--threads", threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    auto cfg = load_config(config_path);
    if (seed && std::getenv("AOI_GRR_SEED") == nullptr) cfg.seed = *seed;
    const SystemSpec spec = validate_and_normalize(cfg.spec);
    const auto sched = build_schedule(spec);

    if (*sched_cmd) {
      print_schedule(std::cout, spec, sched, rounds > 0 ? rounds : sched.d_tilde);
    } else if (*sim_cmd) {
      const auto trace = simulate(SimRun{spec, parse_discipline(discipline), iterations, cfg.seed});
      if (out_path.empty()) {
        write_trace_csv(std::cout, trace);
      } else {
        std::ofstream out(out_path);
        if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + out_path);
        write_trace_csv(out, trace);
      }
    } else if (*bound_cmd) {
      const auto s = parse_source(spec, source_text);
      const auto disc = parse_discipline(discipline);
      std::cout << "discipline,g,i,k,x,n,exponent,prefactor,probability,argmin_ell,theta_star,lb_exponent,"
                   "lb_probability\n";
      std::cout << discipline << ',' << spec.user_group(s.g) << ',' << s.i << ',' << k << ',' << num(x) << ',';
      if (disc == Discipline::IPQ) {
        if (limit_n) {
          const auto [lo, up] = corollary1_asymptotic(spec, sched, s, k, x);
          std::cout << "inf," << num(up) << ",n/a,n/a,n/a,n/a," << num(lo + epsilon) << ",n/a\n";
        } else {
          const auto up = theorem1_upper(spec, sched, s, k, x);
          const auto lo = theorem2_lower(spec, sched, s, k, x, epsilon);
          std::cout << up.n << ',' << num(up.exponent) << ',' << num(up.prefactor) << ',' << num(up.probability)
                    << ',' << up.argmin_ell << ',' << num(up.theta_star) << ',' << num(lo.exponent) << ','
                    << num(lo.probability) << '\n';
          if (up.below_floor) std::cerr << "warning: x <= d_g*b, the threshold is below the deterministic floor\n";
        }
      } else {
        const SpqBoundQuery q{s, k, x};
        if (limit_n) {
          std::cout << "inf," << num(corollary6_asymptotic(spec, sched, q)) << ",n/a,n/a,n/a,n/a,n/a,n/a\n";
        } else {
          const auto up = theorem3_upper(spec, sched, q);
          std::cout << up.n << ',' << num(up.exponent) << ',' << num(up.prefactor) << ',' << num(up.probability)
                    << ",0," << num(up.theta_star) << ",n/a,n/a\n";
          if (up.below_floor) std::cerr << "warning: x <= d_g*b, the threshold is below the deterministic floor\n";
        }
      }
    } else if (*est_cmd) {
      const auto s = parse_source(spec, source_text);
      const auto disc = parse_discipline(discipline);
      const auto e = longrun ? estimate_longrun_fraction(spec, disc, s, x, iterations, cfg.seed)
                             : estimate_violation(spec, disc, s, k, x, reps, cfg.seed, threads);
      std::cout << "p_hat,ci_low,ci_high,reps\n"
                << num(e.p_hat) << ',' << num(e.ci_low) << ',' << num(e.ci_high) << ',' << e.reps << '\n';
      if (e.below_resolution) std::cerr << "note: no violations observed (below resolution)\n";
    } else if (*sweep_cmd) {
      if (cfg.sweep.is_null()) throw Error(ErrorCode::ConfigError, "config has no sweep block");
      auto sw = parse_sweep(cfg.sweep, cfg.spec);
      if (sweep_cmd->count("--reps") > 0) sw.reps = reps;
      if (out_path.empty()) {
        run_sweep(sw, cfg.spec, cfg.seed, std::cout, threads);
      } else {
        std::ofstream out(out_path);
        if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + out_path);
        run_sweep(sw, cfg.spec, cfg.seed, out, threads);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
