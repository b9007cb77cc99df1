#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>

#include <Eigen/Core>

#include "hypoheat/linear_system.hpp"

namespace hypoheat {

enum class Scheme { EulerMaruyama, ExactGaussianStep };

std::string_view to_string(Scheme scheme);
/// Accepts "euler", "euler-maruyama", "exact" (case-sensitive); throws InvalidConfig otherwise.
Scheme parse_scheme(std::string_view name);

struct SimulationConfig {
  long n_paths = 100000;
  double dt = 0.01;
  double t_final = 1.0;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::ExactGaussianStep;
};

/// Throws InvalidConfig unless 0 < dt <= t_final and n_paths >= 2.
void validate_config(const SimulationConfig& config);

/// Number of steps actually taken; the step is t_final / steps.
long step_count(const SimulationConfig& config);

/// Worker threads used by simulate(): HYPOHEAT_THREADS if set, else the hardware count.
unsigned simulation_threads();

/**
 * Endpoint samples of d xi = (alpha + A xi) dt + B dw started at x0, one row
 * per path. Path j draws from its own Philox stream (seed, j), so the result
 * does not depend on the thread count.
 */
Eigen::MatrixXd simulate(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x0,
                         const SimulationConfig& config);

void write_samples_csv(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& samples);

inline constexpr long kMinMomentSamples = 1000;
inline constexpr double kMomentThreshold = 4.0;

struct MomentReport {
  Eigen::VectorXd sample_mean;
  Eigen::MatrixXd sample_cov;
  Eigen::VectorXd reference_mean;
  Eigen::MatrixXd reference_cov;
  /// Mean z-scores first, then the upper triangle of the covariance row by row.
  Eigen::VectorXd standardized_errors;
  double max_abs_z = 0.0;
  double threshold = kMomentThreshold;
  bool pass = false;
};

/// Compares sample moments with m(t) and D_t.
MomentReport moment_check(const Eigen::Ref<const Eigen::MatrixXd>& samples, const LinearSystem& sys,
                          const Eigen::Ref<const Eigen::VectorXd>& x0, double t);

/// Same comparison against a caller-supplied reference.
MomentReport moment_check(const Eigen::Ref<const Eigen::MatrixXd>& samples, const Eigen::VectorXd& reference_mean,
                          const Eigen::MatrixXd& reference_cov);

}  // namespace hypoheat
