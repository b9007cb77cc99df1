#pragma once

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "hypoheat/curvature.hpp"
#include "hypoheat/gramian.hpp"
#include "hypoheat/linear_system.hpp"

namespace hypoheat {

/// int_0^t e^{-sA} ds alpha, from the exponential of [[-A, alpha], [0, 0]].
Eigen::VectorXd drift_integral(const LinearSystem& sys, double t);

/// Mean e^{tA}(x + int_0^t e^{-sA} ds alpha) of the diffusion started at x.
Eigen::VectorXd transition_mean(const LinearSystem& sys, double t, const Eigen::Ref<const Eigen::VectorXd>& x);

/**
 * The Gaussian fundamental solution
 *
 *   p(t, x, y) = exp(phi(t, x, y)) / ((2 pi)^{n/2} sqrt(det D_t)).
 *
 * Holds the adapted-frame expansion so repeated small-time evaluations
 * share it.
 */
class HeatKernel {
 public:
  explicit HeatKernel(LinearSystem sys);

  const LinearSystem& system() const noexcept { return sys_; }
  const Filtration& filtration() const noexcept { return filtration_; }
  const std::shared_ptr<const AdaptedExpansion>& expansion() const noexcept { return expansion_; }

  struct Parts {
    double exponent = 0.0;        ///< phi(t, x, y) <= 0
    double log_det_ratio = 0.0;   ///< log det D_t - N log t
  };
  Parts parts(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) const;

  double log_density(double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y) const;
  double density(double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                 const Eigen::Ref<const Eigen::VectorXd>& y) const;
  /// p(t, x, y) (2 pi)^{n/2} sqrt(c0) t^{N/2}, given c0.
  double normalized(double t, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                    double c0) const;
  /// log of normalized(); finite where the kernel itself underflows.
  double log_normalized(double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& y, double c0) const;

 private:
  LinearSystem sys_;
  Filtration filtration_;
  std::shared_ptr<const AdaptedExpansion> expansion_;
};

double exact_kernel(const LinearSystem& sys, double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& y);

/// a_1, a_2, a_3 as explicit polynomials in tr A, tr Q^(0), tr Q^(1).
std::array<double, 3> low_order_coefficients(double trace_A, double trace_Q0, double trace_Q1);

/// a_0 = 1, a_1, ..., a_h by exponentiating
/// -(1/2)[tr A t + sum_i (-1)^{i+1} tr Q^(i) t^{i+2} / ((i+1)(i+2))].
TruncatedSeries equilibrium_coefficients(double trace_A, const CurvatureExpansion& curvature, int order);

struct KernelAsymptotics {
  Regime regime;
  int order = 0;
  int N = 0;
  double c0 = 0.0;
  Eigen::Index n = 0;
  /// a_0 = 1, ..., a_h (equilibrium and level-1 regimes).
  std::vector<double> a;
  /// Same coefficients from the Taylor series of (det D_t / (c0 t^N))^{-1/2}.
  std::vector<double> a_from_determinant;
  /// tr A / 2 + |y|^2 / 2 with B y = A x0 + alpha (level 1).
  double first_order = 0.0;
  /// Deep-drift regime: p ~ lead(t) exp(-(C + C_correction t + ...) / t^{2i-3}).
  int level = 0;
  double C = 0.0;
  double C_correction = 0.0;
  /// Successive Richardson estimates of C, coarse to fine.
  std::vector<double> C_estimates;

  /// t^{-N/2} / ((2 pi)^{n/2} sqrt(c0)).
  double leading(double t) const;
  /// The regime's approximation of p(t, x0, x0).
  double approximate(double t) const;
};

inline constexpr double kExtrapolationTolerance = 1e-3;

/// Small-time behaviour of p(t, x0, x0). Throws ExtrapolationUnstable when the
/// pole-coefficient estimates disagree by more than kExtrapolationTolerance.
KernelAsymptotics diagonal_asymptotics(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x0,
                                       int order = kDefaultCurvatureOrder);

/// p(t, x, y) = lead(t) e^{-S_t(x, y)} (sum a_i t^i + O(t^{h+1})).
class OffDiagonalAsymptotics {
 public:
  OffDiagonalAsymptotics(const LinearSystem& sys, Eigen::VectorXd x, Eigen::VectorXd y, int order);

  const std::vector<double>& a() const noexcept { return a_; }
  int N() const noexcept { return N_; }
  double c0() const noexcept { return c0_; }

  /// S_t(x, y).
  double cost(double t) const;
  double approximate(double t) const;
  /// p e^{S_t} (2 pi)^{n/2} sqrt(c0) t^{N/2} - sum a_i t^i, using the exact
  /// kernel and the value function.
  double residual(double t) const;

 private:
  HeatKernel kernel_;
  Eigen::VectorXd x_;
  Eigen::VectorXd y_;
  std::vector<double> a_;
  int N_ = 0;
  double c0_ = 0.0;
};

OffDiagonalAsymptotics offdiagonal_asymptotics(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x,
                                               const Eigen::Ref<const Eigen::VectorXd>& y,
                                               int order = kDefaultCurvatureOrder);

}  // namespace hypoheat
