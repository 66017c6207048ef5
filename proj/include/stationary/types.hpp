#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stationary {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = Vec<double>;
using Matrix = Mat<double>;

enum class ErrorCode {
  InvalidSpec,
  NonLorentzian,
  OutOfDomain,
  DegenerateMetric,
  StepSizeUnderflow,
  NonFiniteState,
  MomentumMismatch,
  EnergyMismatch,
  NoExit,
  GrazingExit,
  NotOnBoundary,
  NoInwardSolution,
  ShootingFailed,
  GaugeBreaksSignature,
  BoundaryTraceMismatch,
  ConventionMismatch,
  InvalidGauge,
  LeftDomain,
  DegenerateBoundary,
  AngleUndefined,
  NotNull,
  LambdaNotOne,
  ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::NonLorentzian: return "NonLorentzian";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::DegenerateMetric: return "DegenerateMetric";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::MomentumMismatch: return "MomentumMismatch";
    case ErrorCode::EnergyMismatch: return "EnergyMismatch";
    case ErrorCode::NoExit: return "NoExit";
    case ErrorCode::GrazingExit: return "GrazingExit";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::NoInwardSolution: return "NoInwardSolution";
    case ErrorCode::ShootingFailed: return "ShootingFailed";
    case ErrorCode::GaugeBreaksSignature: return "GaugeBreaksSignature";
    case ErrorCode::BoundaryTraceMismatch: return "BoundaryTraceMismatch";
    case ErrorCode::ConventionMismatch: return "ConventionMismatch";
    case ErrorCode::InvalidGauge: return "InvalidGauge";
    case ErrorCode::LeftDomain: return "LeftDomain";
    case ErrorCode::DegenerateBoundary: return "DegenerateBoundary";
    case ErrorCode::AngleUndefined: return "AngleUndefined";
    case ErrorCode::NotNull: return "NotNull";
    case ErrorCode::LambdaNotOne: return "LambdaNotOne";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stationary
