#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aoi {

enum class ErrorCode {
  EmptyGroups,
  DuplicateOrDecreasingD,
  NonPositiveParameter,
  InconsistentGroupSizes,
  ThetaOutOfDomain,
  EmptyFeasibleSet,
  Unbounded,
  StabilityViolated,
  KTooSmall,
  InvalidSource,
  SourceNotServedInRound,
  HorizonTooShort,
  WrongLaw,
  MinimizerAtCap,
  ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyGroups: return "EmptyGroups";
    case ErrorCode::DuplicateOrDecreasingD: return "DuplicateOrDecreasingD";
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::InconsistentGroupSizes: return "InconsistentGroupSizes";
    case ErrorCode::ThetaOutOfDomain: return "ThetaOutOfDomain";
    case ErrorCode::EmptyFeasibleSet: return "EmptyFeasibleSet";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::StabilityViolated: return "StabilityViolated";
    case ErrorCode::KTooSmall: return "KTooSmall";
    case ErrorCode::InvalidSource: return "InvalidSource";
    case ErrorCode::SourceNotServedInRound: return "SourceNotServedInRound";
    case ErrorCode::HorizonTooShort: return "HorizonTooShort";
    case ErrorCode::WrongLaw: return "WrongLaw";
    case ErrorCode::MinimizerAtCap: return "MinimizerAtCap";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace aoi
