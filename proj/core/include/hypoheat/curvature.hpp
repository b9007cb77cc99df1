#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hypoheat/gramian.hpp"
#include "hypoheat/linear_system.hpp"

namespace hypoheat {

inline constexpr int kDefaultCurvatureOrder = 4;

/// Q(t) = I / t^2 + Q^(0) + Q^(1) t + ... + Q^(h) t^h + O(t^{h+1}), all k x k.
struct CurvatureExpansion {
  Eigen::MatrixXd I;
  std::vector<Eigen::MatrixXd> Q;
  int order = 0;

  double trace_I() const { return I.trace(); }
  /// tr Q^(i), 0 <= i <= order.
  double trace_Q(int i) const { return Q.at(static_cast<std::size_t>(i)).trace(); }
};

/// Q(t) = -d/dt B^T Gamma_t^{-1} B = B^T Gamma_t^{-1} Gammadot_t Gamma_t^{-1} B.
Eigen::MatrixXd q_of_t(const LinearSystem& sys, double t,
                       std::shared_ptr<const AdaptedExpansion> expansion = nullptr);

/// Laurent coefficients from series inversion of the rescaled Gramian.
CurvatureExpansion laurent_expansion(const LinearSystem& sys, const Filtration& filtration,
                                     int order = kDefaultCurvatureOrder);

struct CurvatureFit {
  CurvatureExpansion estimate;
  double residual_rms = 0.0;  ///< of the entrywise fits of t^2 Q(t)
  double condition = 0.0;     ///< of the scaled design matrix
};

/**
 * Independent estimate of the Laurent coefficients: Q(t) is evaluated on
 * t_grid by Gauss-Legendre quadrature of the rescaled Gramian integral, in
 * long double, and t^2 Q(t) is fitted by least squares with a polynomial in
 * t (no linear term). When the grid allows, two terms beyond `order` are
 * fitted and dropped. Throws FitIllConditioned when the design is rank
 * deficient or the grid has fewer than order + 3 points.
 */
CurvatureFit finite_difference_oracle(const LinearSystem& sys, int order, std::span<const double> t_grid);

}  // namespace hypoheat
