#include "hypoheat/curvature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "hypoheat/error.hpp"
#include "hypoheat/quadrature.hpp"

namespace hypoheat {

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& M) { return 0.5 * (M + M.transpose()); }

// [R; 0], the control matrix in adapted coordinates.
Eigen::MatrixXd control_in_adapted(const AdaptedExpansion& ex) {
  const auto& R = ex.leading_control_block();
  Eigen::MatrixXd Bh = Eigen::MatrixXd::Zero(ex.basis().rows(), R.cols());
  Bh.topRows(R.rows()) = R;
  return Bh;
}

// t^2 Q(t) from a rescaled Gramian and rescaled velocity at time t.
Eigen::MatrixXd scaled_q(const Eigen::MatrixXd& M, const Eigen::MatrixXd& U, const Eigen::MatrixXd& Bh) {
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SeriesDegenerate, "rescaled Gramian lost positive definiteness");
  }
  const Eigen::MatrixXd W = U.transpose() * llt.solve(Bh);
  return symmetrized(W.transpose() * W);
}

}  // namespace

Eigen::MatrixXd q_of_t(const LinearSystem& sys, double t, std::shared_ptr<const AdaptedExpansion> expansion) {
  if (!(t > 0.0)) throw Error(ErrorKind::NonPositiveTime, "q_of_t needs t > 0");
  const GramianSolver solver(sys, t, expansion);
  if (solver.small_time_route()) {
    const auto& ex = *solver.expansion();
    return scaled_q(ex.rescaled_gramian(t), ex.rescaled_velocity(t), control_in_adapted(ex)) / (t * t);
  }
  Eigen::MatrixXd X(sys.n(), sys.k());
  for (Eigen::Index c = 0; c < sys.k(); ++c) X.col(c) = solver.solve(sys.B().col(c));
  const Eigen::MatrixXd W = (matrix_exponential(-t * sys.A()) * sys.B()).transpose() * X;
  return symmetrized(W.transpose() * W);
}

CurvatureExpansion laurent_expansion(const LinearSystem& sys, const Filtration& filtration, int order) {
  if (order < 0) throw Error(ErrorKind::InvalidConfig, "curvature order must be >= 0");
  const AdaptedExpansion ex(sys, filtration, order + 2);
  const GramianSeries gs = ex.series(order + 2);
  const auto k = sys.k();
  const Eigen::MatrixXd& R = ex.leading_control_block();

  // B^T Gamma_t^{-1} B = (1/t) R^T [M(t)^{-1}]_{11} R = sum_q F_q t^{q-1}, so
  // Q(t) = F_0 / t^2 - sum_{q>=2} (q-1) F_q t^{q-2}.
  const TruncatedMatrixSeries F = R.transpose() * gs.blocks.inverse().block(0, 0, k, k) * R;

  CurvatureExpansion out;
  out.order = order;
  out.I = symmetrized(F[0]);
  out.Q.reserve(order + 1);
  for (int i = 0; i <= order; ++i) out.Q.push_back(symmetrized(-(i + 1.0) * F[i + 2]));
  return out;
}

CurvatureFit finite_difference_oracle(const LinearSystem& sys, int order, std::span<const double> t_grid) {
  using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  if (order < 0) throw Error(ErrorKind::InvalidConfig, "curvature order must be >= 0");
  const auto rows = static_cast<Eigen::Index>(t_grid.size());
  if (rows < order + 3) throw Error(ErrorKind::FitIllConditioned, "grid needs at least order + 3 points");
  if (!(*std::min_element(t_grid.begin(), t_grid.end()) > 0.0)) {
    throw Error(ErrorKind::NonPositiveTime, "grid times must be positive");
  }
  const double t_max = *std::max_element(t_grid.begin(), t_grid.end());
  // Up to two unreported terms absorb the truncated tail of the Laurent series.
  const int params = order + 2 + static_cast<int>(std::min<Eigen::Index>(2, rows - (order + 3)));

  // Samples of t^2 Q(t) are computed in extended precision so that their
  // rounding noise survives the division by t_max^{i+2} in the fit.
  const Filtration f = build_filtration(sys);
  const Eigen::Index n = sys.n();
  const auto k = sys.k();
  const int m = f.step;
  const Mat P = f.adapted_basis.cast<long double>();
  const Mat A = sys.A().cast<long double>();
  const long double a_norm = A.norm();
  int a_max = 0;
  for (long double term = 1.0L; a_max < 400;) {
    ++a_max;
    term *= a_norm * t_max / a_max;
    if (a_max >= 2 * m + 8 && term < 1e-24L) break;
  }
  std::vector<Mat> K;  // P^T A^a B with the exact zeros of the flag restored
  Mat power = sys.B().cast<long double>();
  for (int a = 0; a <= a_max; ++a) {
    Mat Ka = P.transpose() * power;
    if (a + 1 < m) Ka.bottomRows(n - f.dims[a]).setZero();
    K.push_back(std::move(Ka));
    power = A * power;
  }
  Mat Bh = Mat::Zero(n, k);
  Bh.topRows(k) = K[0].topRows(k);

  // Row j of t^{1 - level} P^T e^{-tA} B.
  auto velocity = [&](long double t) {
    Mat U = Mat::Zero(n, k);
    for (Eigen::Index j = 0; j < n; ++j) {
      const int shift = f.level_of(j) - 1;
      long double coef = 1.0L;
      for (int a = 1; a <= shift; ++a) coef *= -1.0L / a;
      for (int a = shift; a <= a_max; ++a) {
        if (a > shift) coef *= -t / a;
        U.row(j) += coef * K[a].row(j);
      }
    }
    return U;
  };
  const auto rule = gauss_legendre(32, 0.0, 1.0);
  auto scaled_q_ld = [&](long double t) {
    Mat M = Mat::Zero(n, n);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const long double s = rule.nodes[q];
      Mat U = velocity(t * s);
      for (Eigen::Index j = 0; j < n; ++j) U.row(j) *= std::pow(s, f.level_of(j) - 1);
      M.noalias() += static_cast<long double>(rule.weights[q]) * (U * U.transpose());
    }
    Eigen::LLT<Mat> llt(0.5L * (M + M.transpose()));
    if (llt.info() != Eigen::Success) throw Error(ErrorKind::FitIllConditioned, "sampled Gramian is not positive definite");
    const Mat W = velocity(t).transpose() * llt.solve(Bh);
    return Mat(W.transpose() * W);
  };

  Mat design(rows, params);
  Mat values(rows, k * k);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const long double tau = t_grid[r] / t_max;
    design(r, 0) = 1.0L;
    for (int c = 1; c < params; ++c) design(r, c) = std::pow(tau, c + 1);
    const Mat scaled = scaled_q_ld(t_grid[r]);
    for (Eigen::Index c = 0; c < k * k; ++c) values(r, c) = scaled(c % k, c / k);
  }

  Eigen::ColPivHouseholderQR<Mat> qr(design);
  qr.setThreshold(1e-12L);
  if (qr.rank() < params) throw Error(ErrorKind::FitIllConditioned, "least-squares design is rank deficient");
  const Mat coeffs = qr.solve(values);

  CurvatureFit fit;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design.cast<double>());
  fit.condition = svd.singularValues()(0) / svd.singularValues()(params - 1);
  fit.residual_rms =
      static_cast<double>(std::sqrt((design * coeffs - values).squaredNorm() / static_cast<long double>(values.size())));

  auto unpack = [&](int c) {
    Eigen::MatrixXd out(k, k);
    for (Eigen::Index e = 0; e < k * k; ++e) out(e % k, e / k) = static_cast<double>(coeffs(c, e));
    return symmetrized(out);
  };
  fit.estimate.order = order;
  fit.estimate.I = unpack(0);
  for (int i = 0; i <= order; ++i) fit.estimate.Q.push_back(unpack(i + 1) / std::pow(t_max, i + 2));
  return fit;
}

}  // namespace hypoheat
