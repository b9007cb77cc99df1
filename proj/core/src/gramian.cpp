#include "hypoheat/gramian.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "hypoheat/error.hpp"

namespace hypoheat {

namespace {

void require_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorKind::NonPositiveTime, "time must be positive and finite, got " + std::to_string(t));
  }
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& M) { return 0.5 * (M + M.transpose()); }

std::vector<double> inverse_factorials(int count) {
  std::vector<double> f(static_cast<std::size_t>(count) + 1);
  f[0] = 1.0;
  for (int i = 1; i <= count; ++i) f[i] = f[i - 1] / i;
  return f;
}

// Smallest q with (a t)^q / q! below 1e-20, at least `floor`.
int terms_for(double norm_A, double t, int floor) {
  const double x = norm_A * t;
  double term = 1.0;
  int q = 0;
  while (q < 400) {
    ++q;
    term *= x / q;
    if (q >= floor && term < 1e-20) break;
  }
  return q;
}

}  // namespace

Eigen::MatrixXd matrix_exponential(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  if (M.rows() != M.cols()) throw Error(ErrorKind::DimensionMismatch, "exponential needs a square matrix");
  if (!M.allFinite()) throw Error(ErrorKind::NonFinite, "matrix exponential of non-finite input");
  Eigen::MatrixXd E = Eigen::MatrixXd(M).exp();
  if (!E.allFinite()) throw Error(ErrorKind::NonFinite, "matrix exponential overflowed");
  return E;
}

Eigen::MatrixXd gramian_signed(const LinearSystem& sys, double t) {
  if (!std::isfinite(t)) throw Error(ErrorKind::NonFinite, "time must be finite");
  const Eigen::Index n = sys.n();
  // exp([[A, BB^T], [0, -A^T]] t) = [[e^{tA}, G], [0, e^{-tA^T}]] with
  // e^{-tA} G = Gamma_t.
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  H.topLeftCorner(n, n) = sys.A();
  H.topRightCorner(n, n) = sys.B() * sys.B().transpose();
  H.bottomRightCorner(n, n) = -sys.A().transpose();
  const Eigen::MatrixXd E = matrix_exponential(H * t);
  return symmetrized(E.bottomRightCorner(n, n).transpose() * E.topRightCorner(n, n));
}

Eigen::MatrixXd gramian(const LinearSystem& sys, double t) {
  require_positive_time(t);
  return gramian_signed(sys, t);
}

Eigen::MatrixXd gramian_quadrature(const LinearSystem& sys, double t, const AdaptiveOptions& options) {
  require_positive_time(t);
  const Eigen::MatrixXd& A = sys.A();
  const Eigen::MatrixXd& B = sys.B();
  auto integrand = [&](double s) -> Eigen::MatrixXd {
    const Eigen::MatrixXd V = matrix_exponential(-s * A) * B;
    return V * V.transpose();
  };
  return symmetrized(integrate_adaptive(integrand, 0.0, t, options));
}

Eigen::MatrixXd covariance(const LinearSystem& sys, double t) {
  require_positive_time(t);
  const Eigen::MatrixXd E = matrix_exponential(t * sys.A());
  return symmetrized(E * gramian(sys, t) * E.transpose());
}

Eigen::MatrixXd integrated_flow(const Eigen::Ref<const Eigen::MatrixXd>& A, double t) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  H.topLeftCorner(n, n) = -A;
  H.topRightCorner(n, n).setIdentity();
  return matrix_exponential(H * t).topRightCorner(n, n);
}

AdaptedExpansion::AdaptedExpansion(const LinearSystem& sys, const Filtration& filtration, int min_terms)
    : filtration_(filtration), A_(sys.A()) {
  const Eigen::MatrixXd& P = filtration_.adapted_basis;
  const Eigen::Index n = sys.n();
  const int m = filtration_.step;
  const int q_max = terms_for(A_.norm(), kExpansionHorizon, std::max(min_terms, 24));
  const int a_max = q_max + 2 * m - 2;
  const auto inv_fact = inverse_factorials(a_max + 1);

  powers_.reserve(a_max + 1);
  Eigen::MatrixXd power_times_B = sys.B();
  for (int a = 0; a <= a_max; ++a) {
    Eigen::MatrixXd K = P.transpose() * power_times_B;
    // A^a B lies in E_{a+1}.
    if (a + 1 < m) K.bottomRows(n - filtration_.dims[a]).setZero();
    powers_.push_back(std::move(K));
    power_times_B = A_ * power_times_B;
  }
  control_block_ = powers_[0].topRows(sys.k());

  // Taylor coefficients of P^T Gamma_t P:
  //   G_p = (-1)^{p-1} / p * sum_{a+b=p-1} K_a K_b^T / (a! b!).
  const int p_max = q_max + 2 * m - 1;
  std::vector<Eigen::MatrixXd> G(p_max + 1, Eigen::MatrixXd::Zero(n, n));
  for (int p = 1; p <= p_max; ++p) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a <= p - 1; ++a) {
      const int b = p - 1 - a;
      acc.noalias() += (inv_fact[a] * inv_fact[b]) * (powers_[a] * powers_[b].transpose());
    }
    G[p] = ((p - 1) % 2 == 0 ? 1.0 : -1.0) / p * acc;
  }

  // Block (i, j) of M_q is block (i, j) of G_{q+i+j-1}.
  coeffs_.assign(q_max + 1, Eigen::MatrixXd::Zero(n, n));
  for (int q = 0; q <= q_max; ++q) {
    for (int i = 1; i <= m; ++i) {
      for (int j = 1; j <= m; ++j) {
        const auto r0 = filtration_.block_offset(i);
        const auto c0 = filtration_.block_offset(j);
        const auto rs = filtration_.block_size(i);
        const auto cs = filtration_.block_size(j);
        coeffs_[q].block(r0, c0, rs, cs) = G[q + i + j - 1].block(r0, c0, rs, cs);
      }
    }
    coeffs_[q] = symmetrized(coeffs_[q]);
  }
}

GramianSeries AdaptedExpansion::series(int order) const {
  if (order < 0 || order > terms()) {
    throw Error(ErrorKind::InvalidConfig, "series order " + std::to_string(order) + " outside [0, " +
                                              std::to_string(terms()) + "]");
  }
  GramianSeries s;
  s.order = order;
  s.blocks = TruncatedMatrixSeries(std::vector<Eigen::MatrixXd>(coeffs_.begin(), coeffs_.begin() + order + 1));
  s.half_powers = filtration_.half_powers();

  const Eigen::MatrixXd& X = coeffs_[0];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(X, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 1e-14 * ev.maxCoeff())) {
    throw Error(ErrorKind::SeriesDegenerate, "leading rescaled Gramian is not positive definite");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(X);
  const Eigen::VectorXd d = Eigen::MatrixXd(llt.matrixL()).diagonal();
  s.c0 = d.array().square().prod();
  return s;
}

Eigen::MatrixXd AdaptedExpansion::rescaled_gramian(double t) const {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(coeffs_[0].rows(), coeffs_[0].cols());
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Eigen::MatrixXd AdaptedExpansion::rescaled_velocity(double t) const {
  const Eigen::Index n = powers_[0].rows();
  const int a_max = static_cast<int>(powers_.size()) - 1;
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(n, powers_[0].cols());
  for (Eigen::Index j = 0; j < n; ++j) {
    const int shift = filtration_.level_of(j) - 1;
    double coef = 1.0;  // (-1)^a t^{a-shift} / a!
    for (int a = 1; a <= shift; ++a) coef *= -1.0 / a;
    for (int a = shift; a <= a_max; ++a) {
      if (a > shift) coef *= -t / a;
      U.row(j) += coef * powers_[a].row(j);
    }
  }
  return U;
}

Eigen::VectorXd AdaptedExpansion::integrated_flow_adapted(double t, const Eigen::Ref<const Eigen::VectorXd>& v) const {
  const Eigen::MatrixXd& P = filtration_.adapted_basis;
  const Eigen::Index n = P.rows();
  const double vnorm = v.norm();
  if (vnorm == 0.0) return Eigen::VectorXd::Zero(n);

  // Level of v in the flag; A^a v then lies in E_{level+a}.
  int level = filtration_.step;
  for (int i = 1; i <= filtration_.step; ++i) {
    const auto Q = P.leftCols(filtration_.dims[i - 1]);
    if ((v - Q * (Q.transpose() * v)).norm() <= kMembershipTolerance * vnorm) {
      level = i;
      break;
    }
  }

  const int a_max = static_cast<int>(powers_.size()) - 1;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd power_v = v;
  double coef = t;  // (-1)^a t^{a+1} / (a+1)!
  for (int a = 0; a <= a_max; ++a) {
    if (a > 0) coef *= -t / (a + 1);
    Eigen::VectorXd w = P.transpose() * power_v;
    if (level + a < filtration_.step) w.tail(n - filtration_.dims[level + a - 1]).setZero();
    acc += coef * w;
    power_v = A_ * power_v;
  }
  return acc;
}

Eigen::VectorXd AdaptedExpansion::unscale(double t, const Eigen::Ref<const Eigen::VectorXd>& w_adapted) const {
  const Eigen::VectorXi h = filtration_.half_powers();
  Eigen::VectorXd z(w_adapted.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = w_adapted(j) * std::pow(t, -0.5 * h(j));
  return z;
}

GramianSeries rescaled_series(const LinearSystem& sys, const Filtration& filtration, int order) {
  if (order < 2) throw Error(ErrorKind::InvalidConfig, "rescaled series needs order >= 2");
  return AdaptedExpansion(sys, filtration, order).series(order);
}

DeterminantExpansion det_covariance_expansion(const GramianSeries& series, double trace_A, int order) {
  if (order < 1 || order > series.order) {
    throw Error(ErrorKind::InvalidConfig, "determinant expansion order must lie in [1, series order]");
  }
  const auto M = series.blocks.truncated(order);
  const Eigen::MatrixXd X_inv = M[0].llt().solve(Eigen::MatrixXd::Identity(M.rows(), M.cols()));

  // det D_t = det(e^{2tA}) t^N det M(t) = c0 t^N e^{2 t trA} det(I + X^{-1}(M - X)).
  std::vector<Eigen::MatrixXd> n_coeffs(order + 1, Eigen::MatrixXd::Zero(M.rows(), M.cols()));
  for (int q = 1; q <= order; ++q) n_coeffs[q] = X_inv * M[q];
  TruncatedSeries log_factor = TruncatedMatrixSeries::log_det_identity_plus(TruncatedMatrixSeries(std::move(n_coeffs)));
  std::vector<double> drift(order + 1, 0.0);
  drift[1] = 2.0 * trace_A;
  log_factor = log_factor + TruncatedSeries(std::move(drift));

  DeterminantExpansion out;
  out.c0 = series.c0;
  out.exponent = series.exponent();
  out.factor = log_factor.exp();
  return out;
}

}  // namespace hypoheat

namespace hypoheat {

bool direct_route_allowed(const Eigen::MatrixXd& S, double t) {
  if (t > kExpansionHorizon) return true;
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S, Eigen::EigenvaluesOnly).eigenvalues();
  return ev(0) > 0.0 && ev(ev.size() - 1) <= kDirectConditionLimit * ev(0);
}

GramianSolver::GramianSolver(const LinearSystem& sys, double t, std::shared_ptr<const AdaptedExpansion> expansion)
    : t_(t), small_(t < kSmallTime), expansion_(std::move(expansion)) {
  require_positive_time(t);
  if (!small_) {
    basis_ = expansion_ ? expansion_->basis() : build_filtration(sys).adapted_basis;
    gamma_ = gramian(sys, t);
    llt_.compute(gamma_);
    if (llt_.info() == Eigen::Success && direct_route_allowed(gamma_, t)) {
      const Eigen::VectorXd d = Eigen::MatrixXd(llt_.matrixL()).diagonal();
      log_det_ = 2.0 * d.array().log().sum();
      return;
    }
    if (t > kExpansionHorizon) throw Error(ErrorKind::SeriesDegenerate, "Gramian is not numerically positive definite");
    small_ = true;
    gamma_.resize(0, 0);
  }
  if (!expansion_) expansion_ = std::make_shared<const AdaptedExpansion>(sys, build_filtration(sys));
  basis_ = expansion_->basis();
  rescaled_ = expansion_->rescaled_gramian(t);
  llt_.compute(rescaled_);
  if (llt_.info() != Eigen::Success) {
    throw Error(ErrorKind::SeriesDegenerate, "rescaled Gramian lost positive definiteness");
  }
  const Eigen::VectorXd d = Eigen::MatrixXd(llt_.matrixL()).diagonal();
  log_det_ = 2.0 * d.array().log().sum() + expansion_->filtration().exponent * std::log(t);
}

Eigen::VectorXd GramianSolver::solve(const Eigen::Ref<const Eigen::VectorXd>& w) const {
  if (!small_) return llt_.solve(w);
  const Eigen::MatrixXd& P = expansion_->basis();
  const Eigen::VectorXd z = expansion_->unscale(t_, P.transpose() * w);
  return P * expansion_->unscale(t_, llt_.solve(z));
}

double GramianSolver::inverse_quadratic(const Eigen::Ref<const Eigen::VectorXd>& w) const {
  if (!small_) return llt_.matrixL().solve(w).squaredNorm();
  return inverse_quadratic_adapted(expansion_->basis().transpose() * w);
}

double GramianSolver::inverse_quadratic_adapted(const Eigen::Ref<const Eigen::VectorXd>& w_adapted) const {
  if (!small_) return inverse_quadratic(basis_ * w_adapted);
  const Eigen::VectorXd z = expansion_->unscale(t_, w_adapted);
  return llt_.matrixL().solve(z).squaredNorm();
}

double GramianSolver::quadratic(const Eigen::Ref<const Eigen::VectorXd>& p) const {
  if (!small_) return p.dot(gamma_ * p);
  const Eigen::VectorXd y = expansion_->unscale(1.0 / t_, expansion_->basis().transpose() * p);
  return y.dot(rescaled_ * y);
}

}  // namespace hypoheat
