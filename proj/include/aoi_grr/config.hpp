#pragma once

// JSON configuration files.
//
//   {
//     "groups": [{"d": 1, "count": 10}, {"d": 2, "count": 10}],
//     "b": 5,
//     "service": {"kind": "exponential", "rate": 0.3333},
//     "n_scaling": "total",          // or "per_group"
//     "n": 30,                       // optional explicit n
//     "seed": 1,
//     "sweep": { ... }               // optional, see sweep.hpp
//   }

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "aoi_grr/dist.hpp"
#include "aoi_grr/error.hpp"
#include "aoi_grr/model.hpp"

namespace aoi {

using json = nlohmann::json;

struct Config {
  SystemSpec spec;
  std::uint64_t seed = 1;
  json sweep;  // null when absent
};

inline ServiceLaw parse_service(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "exponential") {
    if (j.contains("rate")) return Exponential{j.at("rate").get<double>()};
    return Exponential{1.0 / j.at("mean").get<double>()};
  }
  if (kind == "geometric") return Geometric{j.at("p").get<double>()};
  if (kind == "deterministic") return Deterministic{j.at("v").get<double>()};
  throw Error(ErrorCode::ConfigError, "unknown service.kind '" + kind + "'");
}

inline json service_to_json(const ServiceLaw& law) {
  return std::visit(
      [](const auto& l) -> json {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Exponential>) return {{"kind", "exponential"}, {"rate", l.rate}};
        else if constexpr (std::is_same_v<L, Geometric>) return {{"kind", "geometric"}, {"p", l.p}};
        else return {{"kind", "deterministic"}, {"v", l.v}};
      },
      law);
}

inline NScaling parse_scaling(const std::string& s) {
  if (s == "total") return NScaling::TotalSources;
  if (s == "per_group") return NScaling::PerGroupSize;
  throw Error(ErrorCode::ConfigError, "n_scaling must be 'total' or 'per_group'");
}

inline Config parse_config(const json& j) {
  Config cfg;
  try {
    for (const auto& g : j.at("groups"))
      cfg.spec.groups.push_back(GroupSpec{g.at("d").get<std::int64_t>(), g.at("count").get<std::int64_t>(), false});
    cfg.spec.b = j.at("b").get<double>();
    cfg.spec.service = parse_service(j.at("service"));
    if (j.contains("n_scaling")) cfg.spec.n_scaling = parse_scaling(j.at("n_scaling").get<std::string>());
    if (j.contains("n")) cfg.spec.n_override = j.at("n").get<std::int64_t>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("sweep")) cfg.sweep = j.at("sweep");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return cfg;
}

/// AOI_GRR_SEED, when set, replaces the configured seed.
inline void apply_env_overrides(Config& cfg) {
  if (const char* env = std::getenv("AOI_GRR_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, "AOI_GRR_SEED is not an unsigned integer");
    }
  }
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, path + ": " + e.what());
  }
  auto cfg = parse_config(j);
  apply_env_overrides(cfg);
  return cfg;
}

}  // namespace aoi
