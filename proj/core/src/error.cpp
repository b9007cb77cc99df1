#include "hypoheat/error.hpp"

namespace hypoheat {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RankDeficientB: return "RankDeficientB";
    case ErrorKind::NotControllable: return "NotControllable";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NonPositiveTime: return "NonPositiveTime";
    case ErrorKind::SeriesDegenerate: return "SeriesDegenerate";
    case ErrorKind::FitIllConditioned: return "FitIllConditioned";
    case ErrorKind::ExtrapolationUnstable: return "ExtrapolationUnstable";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

NotControllableError::NotControllableError(int kalman_rank, int dimension)
    : Error(ErrorKind::NotControllable,
            "Kalman rank " + std::to_string(kalman_rank) + " < n = " + std::to_string(dimension)),
      kalman_rank_(kalman_rank),
      dimension_(dimension) {}

}  // namespace hypoheat
