#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace whf {

/// Failure categories surfaced by the library. Each maps onto one CLI exit code.
enum class ErrorKind {
  InvalidArgument,
  NonConvergence,
  ZeroDenominator,
  BadLambda,
  BranchPointNearContour,
  ZeroOnContour,
  NonZeroWinding,
  NonCanonical,
  PrecondViolation,
  NotSymmetric,
  QuotientUnboundedAtInfinity,
  PoleOnContour,
  UnsupportedMultiplicity,
  R2SystemSingular,
  ResidualPole,
  DegenerateBranch,
  UnboundedAtInfinity,
  ZeroEntry,
  PathTooCoarse,
  BadConfig,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::BadLambda: return "BadLambda";
    case ErrorKind::BranchPointNearContour: return "BranchPointNearContour";
    case ErrorKind::ZeroOnContour: return "ZeroOnContour";
    case ErrorKind::NonZeroWinding: return "NonZeroWinding";
    case ErrorKind::NonCanonical: return "NonCanonical";
    case ErrorKind::PrecondViolation: return "PrecondViolation";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::QuotientUnboundedAtInfinity: return "QuotientUnboundedAtInfinity";
    case ErrorKind::PoleOnContour: return "PoleOnContour";
    case ErrorKind::UnsupportedMultiplicity: return "UnsupportedMultiplicity";
    case ErrorKind::R2SystemSingular: return "R2SystemSingular";
    case ErrorKind::ResidualPole: return "ResidualPole";
    case ErrorKind::DegenerateBranch: return "DegenerateBranch";
    case ErrorKind::UnboundedAtInfinity: return "UnboundedAtInfinity";
    case ErrorKind::ZeroEntry: return "ZeroEntry";
    case ErrorKind::PathTooCoarse: return "PathTooCoarse";
    case ErrorKind::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

}  // namespace whf
