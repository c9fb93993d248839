#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gammadisc {

enum class ErrorKind {
  InvalidArgument,
  NotHermitian,
  NegativeEigenvalue,
  DimensionMismatch,
  EmptyCoefficients,
  NotCommuting,
  NotNormal,
  NotContractive,
  UnsupportedKind,
  JointDiagonalizationFailure,
  NoConvergence,
  IndexOutOfRange,
  DefectFailure,
  PureTuple,
  IllConditioned,
  NotIsomorphic,
  NotAModuleMap,
  NotUnitaryModule,
  GapTooSmall,
  NotInCommutant,
  NotToeplitz,
  Inconsistent,
  NotIntertwining,
  ParseError,
  IoError,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::EmptyCoefficients: return "EmptyCoefficients";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::NotNormal: return "NotNormal";
    case ErrorKind::NotContractive: return "NotContractive";
    case ErrorKind::UnsupportedKind: return "UnsupportedKind";
    case ErrorKind::JointDiagonalizationFailure: return "JointDiagonalizationFailure";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::DefectFailure: return "DefectFailure";
    case ErrorKind::PureTuple: return "PureTuple";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::NotIsomorphic: return "NotIsomorphic";
    case ErrorKind::NotAModuleMap: return "NotAModuleMap";
    case ErrorKind::NotUnitaryModule: return "NotUnitaryModule";
    case ErrorKind::GapTooSmall: return "GapTooSmall";
    case ErrorKind::NotInCommutant: return "NotInCommutant";
    case ErrorKind::NotToeplitz: return "NotToeplitz";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::NotIntertwining: return "NotIntertwining";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gammadisc
