#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qtomo {

enum class ErrorKind {
  NonHermitianInput,
  NegativeEigenvalue,
  InvalidDensityMatrix,
  DegenerateParams,
  IncompleteDataset,
  SingularSystem,
  NotConverged,
  ZeroDenominator,
  IncompleteGrid,
  AllZero,
  ZeroN0,
  DegenerateFit,
  WavelengthOutOfModelRange,
  NonPhysical,
  SchemaMismatch,
  NegativeRate,
  MissingHeaderKey,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitianInput: return "NonHermitianInput";
    case ErrorKind::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorKind::InvalidDensityMatrix: return "InvalidDensityMatrix";
    case ErrorKind::DegenerateParams: return "DegenerateParams";
    case ErrorKind::IncompleteDataset: return "IncompleteDataset";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::IncompleteGrid: return "IncompleteGrid";
    case ErrorKind::AllZero: return "AllZero";
    case ErrorKind::ZeroN0: return "ZeroN0";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::WavelengthOutOfModelRange: return "WavelengthOutOfModelRange";
    case ErrorKind::NonPhysical: return "NonPhysical";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::NegativeRate: return "NegativeRate";
    case ErrorKind::MissingHeaderKey: return "MissingHeaderKey";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qtomo
