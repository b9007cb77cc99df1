#include "hypoheat/quadrature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hypoheat/error.hpp"

namespace hypoheat {

QuadratureRule gauss_legendre(int points, double a, double b) {
  if (points < 1) throw Error(ErrorKind::InvalidConfig, "quadrature needs at least one node");
  // Jacobi matrix of the Legendre recurrence: off-diagonal j / sqrt(4j^2 - 1).
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(points, points);
  for (int j = 1; j < points; ++j) {
    const double beta = j / std::sqrt(4.0 * j * j - 1.0);
    J(j, j - 1) = beta;
    J(j - 1, j) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  QuadratureRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int i = 0; i < points; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    rule.nodes[i] = mid + half * eig.eigenvalues()(i);
    rule.weights[i] = 2.0 * v0 * v0 * half;
  }
  return rule;
}

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

struct Panel {
  Eigen::MatrixXd kronrod;
  double error;
};

Panel gk15(const MatrixIntegrand& f, double a, double b) {
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);

  Eigen::MatrixXd centre = f(mid);
  Eigen::MatrixXd k = wk[0] * centre;
  Eigen::MatrixXd g = wg[0] * centre;
  for (std::size_t i = 1; i < x.size(); ++i) {
    Eigen::MatrixXd pair = f(mid - half * x[i]) + f(mid + half * x[i]);
    k += wk[i] * pair;
    if (i % 2 == 0) g += wg[i / 2] * pair;
  }
  k *= half;
  g *= half;
  return {k, (k - g).norm()};
}

Eigen::MatrixXd recurse(const MatrixIntegrand& f, double a, double b, const Panel& whole,
                        double tol, int depth, const AdaptiveOptions& options) {
  if (whole.error <= tol || depth >= options.max_depth) return whole.kronrod;
  const double mid = 0.5 * (a + b);
  const Panel left = gk15(f, a, mid);
  const Panel right = gk15(f, mid, b);
  return recurse(f, a, mid, left, 0.5 * tol, depth + 1, options) +
         recurse(f, mid, b, right, 0.5 * tol, depth + 1, options);
}

}  // namespace

Eigen::MatrixXd integrate_adaptive(const MatrixIntegrand& f, double a, double b,
                                   const AdaptiveOptions& options) {
  const Panel whole = gk15(f, a, b);
  const double tol = std::max(options.abs_tol, options.rel_tol * whole.kronrod.norm());
  return recurse(f, a, b, whole, tol, 0, options);
}

}  // namespace hypoheat
