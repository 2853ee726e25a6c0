#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cmv {

enum class ErrorKind {
  InvalidArgument,
  InvalidVerblunsky,
  InvalidMeasure,
  NonPositiveOffDiagonal,
  DegenerateSpectrum,
  SupportTooSmall,
  IllConditioned,
  InvalidBoundary,
  NotSymmetric,
  SupportAtRealAxis,
  InvalidNu,
  InvalidParams,
  DomainViolation,
  EmptySample,
  RhoTooSmall,
  OutOfRange,
  NonDistinctLambda,
  NonDifferentiable,
  MatchingAmbiguous,
  BranchProximity,
  Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// True for errors that come from the mathematics (degenerate data, leaving
/// the disk, ...) rather than from bad parameters.
bool is_domain_error(ErrorKind kind) noexcept;

}  // namespace cmv
