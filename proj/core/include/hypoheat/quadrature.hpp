#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace hypoheat {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `points` nodes mapped to [a, b] (Golub-Welsch).
QuadratureRule gauss_legendre(int points, double a, double b);

using MatrixIntegrand = std::function<Eigen::MatrixXd(double)>;

struct AdaptiveOptions {
  double rel_tol = 1e-13;
  double abs_tol = 0.0;
  int max_depth = 30;
};

/// Adaptive (G7, K15) quadrature of a matrix-valued integrand on [a, b];
/// the error estimate is the Frobenius norm of the Kronrod-Gauss difference.
Eigen::MatrixXd integrate_adaptive(const MatrixIntegrand& f, double a, double b,
                                   const AdaptiveOptions& options = {});

}  // namespace hypoheat
