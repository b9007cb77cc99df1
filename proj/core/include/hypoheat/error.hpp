#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hypoheat {

enum class ErrorKind {
  DimensionMismatch,
  RankDeficientB,
  NotControllable,
  NonFinite,
  NonPositiveTime,
  SeriesDegenerate,
  FitIllConditioned,
  ExtrapolationUnstable,
  InvalidConfig,
  TooFewSamples,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it to an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when the Kalman rank never reaches n.
class NotControllableError : public Error {
 public:
  NotControllableError(int kalman_rank, int dimension);

  int kalman_rank() const noexcept { return kalman_rank_; }
  int dimension() const noexcept { return dimension_; }

 private:
  int kalman_rank_;
  int dimension_;
};

}  // namespace hypoheat
