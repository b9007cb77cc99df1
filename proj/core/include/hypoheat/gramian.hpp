#pragma once

#include <memory>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "hypoheat/linear_system.hpp"
#include "hypoheat/quadrature.hpp"
#include "hypoheat/series.hpp"

namespace hypoheat {

/// Below this time nothing inverts Gamma_t or D_t directly; the rescaled
/// representation in adapted coordinates is used instead.
inline constexpr double kSmallTime = 0.05;
/// The adapted expansion is summed to 1e-20 accuracy for t up to this value.
inline constexpr double kExpansionHorizon = 0.1;
/// Below kExpansionHorizon a Gramian or covariance with a larger spectral
/// condition number is not factored directly.
inline constexpr double kDirectConditionLimit = 1e8;
inline constexpr int kDefaultSeriesOrder = 8;

/// True when the symmetric S may be factored directly at time t: always
/// beyond kExpansionHorizon, otherwise only if cond(S) <= kDirectConditionLimit.
bool direct_route_allowed(const Eigen::MatrixXd& S, double t);

/// e^M by scaling and squaring with a Pade approximant. Throws NonFinite.
Eigen::MatrixXd matrix_exponential(const Eigen::Ref<const Eigen::MatrixXd>& M);

/// Gamma_t = int_0^t e^{-sA} B B^T e^{-sA^T} ds for t > 0 (NonPositiveTime otherwise).
Eigen::MatrixXd gramian(const LinearSystem& sys, double t);
/// The same integral with a signed upper limit; Gamma_{-t} = -D_t.
Eigen::MatrixXd gramian_signed(const LinearSystem& sys, double t);
/// Adaptive Gauss-Kronrod evaluation of the defining integral.
Eigen::MatrixXd gramian_quadrature(const LinearSystem& sys, double t,
                                   const AdaptiveOptions& options = {});
/// D_t = e^{tA} Gamma_t e^{tA^T}, the covariance of the diffusion at time t.
Eigen::MatrixXd covariance(const LinearSystem& sys, double t);
/// int_0^t e^{-sA} ds.
Eigen::MatrixXd integrated_flow(const Eigen::Ref<const Eigen::MatrixXd>& A, double t);

/**
 * Taylor data of Gamma_t in adapted coordinates, rescaled so that
 *
 *   P^T Gamma_t P = J (M_0 + M_1 t + M_2 t^2 + ...) J,   J = diag(sqrt(t)^{2i-1}),
 *
 * where P is the adapted basis of the filtration. M_0 and M_1 are the
 * matrices usually written X and Y.
 */
struct GramianSeries {
  int order = 0;
  TruncatedMatrixSeries blocks;
  /// det M_0 > 0.
  double c0 = 0.0;
  /// Per adapted coordinate, the power of sqrt(t) in J.
  Eigen::VectorXi half_powers;

  const Eigen::MatrixXd& X() const { return blocks[0]; }
  const Eigen::MatrixXd& Y() const { return blocks[1]; }
  int exponent() const { return half_powers.sum(); }
};

/**
 * Everything in the rescaled adapted frame: series coefficients of M(t) and
 * pointwise evaluation of M(t), of the rescaled velocity and of drift
 * integrals. Pointwise evaluations sum the convergent series to machine
 * precision; they are meant for t <= 0.1.
 */
class AdaptedExpansion {
 public:
  AdaptedExpansion(const LinearSystem& sys, const Filtration& filtration, int min_terms = 0);

  const Filtration& filtration() const noexcept { return filtration_; }
  const Eigen::MatrixXd& basis() const noexcept { return filtration_.adapted_basis; }
  int terms() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  /// Coefficients M_0..M_h. Throws SeriesDegenerate if M_0 is not positive definite.
  GramianSeries series(int order) const;

  /// M(t) = J^{-1} P^T Gamma_t P J^{-1}.
  Eigen::MatrixXd rescaled_gramian(double t) const;
  /// U(t) = sqrt(t) J^{-1} P^T e^{-tA} B, so that P^T Gammadot_t P = J U U^T J / t.
  Eigen::MatrixXd rescaled_velocity(double t) const;
  /// P^T int_0^t e^{-sA} ds v, summed blockwise to full relative accuracy.
  Eigen::VectorXd integrated_flow_adapted(double t, const Eigen::Ref<const Eigen::VectorXd>& v) const;
  /// J^{-1} applied to a vector already in adapted coordinates.
  Eigen::VectorXd unscale(double t, const Eigen::Ref<const Eigen::VectorXd>& w_adapted) const;
  /// P^T B restricted to its first k rows (the rest vanish).
  const Eigen::MatrixXd& leading_control_block() const noexcept { return control_block_; }

 private:
  Filtration filtration_;
  Eigen::MatrixXd A_;
  std::vector<Eigen::MatrixXd> powers_;  // P^T A^a B, structural zeros cleared
  std::vector<Eigen::MatrixXd> coeffs_;  // M_q
  Eigen::MatrixXd control_block_;
};

GramianSeries rescaled_series(const LinearSystem& sys, const Filtration& filtration,
                              int order = kDefaultSeriesOrder);

/// det D_t = c0 t^N (1 + e_1 t + ... + e_h t^h).
struct DeterminantExpansion {
  double c0 = 0.0;
  int exponent = 0;
  TruncatedSeries factor;  ///< 1 + e_1 t + ...
};

DeterminantExpansion det_covariance_expansion(const GramianSeries& series, double trace_A, int order);

}  // namespace hypoheat

namespace hypoheat {

/**
 * Factorized Gamma_t. For t >= kSmallTime this is a Cholesky factor of
 * Gamma_t itself; below it the factor is taken of the rescaled M(t) and the
 * J scalings are applied exactly, since cond(Gamma_t) grows like t^{2-2m}.
 * Up to kExpansionHorizon the rescaled route is also used when the direct
 * factor fails or direct_route_allowed() rejects it.
 */
class GramianSolver {
 public:
  GramianSolver(const LinearSystem& sys, double t,
                std::shared_ptr<const AdaptedExpansion> expansion = nullptr);

  double time() const noexcept { return t_; }
  bool small_time_route() const noexcept { return small_; }

  Eigen::VectorXd solve(const Eigen::Ref<const Eigen::VectorXd>& w) const;
  /// w^T Gamma_t^{-1} w.
  double inverse_quadratic(const Eigen::Ref<const Eigen::VectorXd>& w) const;
  /// Same, with w given in adapted coordinates P^T w.
  double inverse_quadratic_adapted(const Eigen::Ref<const Eigen::VectorXd>& w_adapted) const;
  /// p^T Gamma_t p.
  double quadratic(const Eigen::Ref<const Eigen::VectorXd>& p) const;
  double log_det() const noexcept { return log_det_; }

  const std::shared_ptr<const AdaptedExpansion>& expansion() const noexcept { return expansion_; }

 private:
  double t_;
  bool small_;
  std::shared_ptr<const AdaptedExpansion> expansion_;
  Eigen::LLT<Eigen::MatrixXd> llt_;  // of Gamma_t or of M(t)
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd gamma_;            // Gamma_t (large route only)
  Eigen::MatrixXd rescaled_;         // M(t) (small route only)
  double log_det_ = 0.0;
};

}  // namespace hypoheat
