#include "hypoheat/linear_system.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "hypoheat/error.hpp"

namespace hypoheat {

namespace {

bool all_finite(const Eigen::Ref<const Eigen::MatrixXd>& M) { return M.allFinite(); }

// Columns [B, AB, ..., A^{i-1}B].
Eigen::MatrixXd kalman_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int blocks) {
  const Eigen::Index n = A.rows();
  const Eigen::Index k = B.cols();
  Eigen::MatrixXd K(n, k * blocks);
  Eigen::MatrixXd power_times_B = B;
  for (int i = 0; i < blocks; ++i) {
    K.middleCols(i * k, k) = power_times_B;
    power_times_B = A * power_times_B;
  }
  return K;
}

std::vector<int> growth_vector(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double tol) {
  const int n = static_cast<int>(A.rows());
  std::vector<int> dims;
  for (int i = 1; i <= n; ++i) {
    const int r = numerical_rank(kalman_matrix(A, B, i), tol);
    if (!dims.empty() && r <= dims.back()) break;  // the flag has stabilized
    dims.push_back(r);
    if (r == n) break;
  }
  return dims;
}

}  // namespace

int numerical_rank(const Eigen::Ref<const Eigen::MatrixXd>& M, double rel_tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double threshold = rel_tol * sv(0);
  return static_cast<int>((sv.array() > threshold).count());
}

LinearSystem validate_system(Eigen::MatrixXd A, Eigen::MatrixXd B,
                             std::optional<Eigen::VectorXd> alpha, double rank_tol) {
  if (A.rows() < 1 || A.rows() != A.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "A must be square and non-empty");
  }
  const Eigen::Index n = A.rows();
  if (B.rows() != n) {
    throw Error(ErrorKind::DimensionMismatch,
                "B has " + std::to_string(B.rows()) + " rows, expected " + std::to_string(n));
  }
  if (B.cols() < 1 || B.cols() > n) {
    throw Error(ErrorKind::DimensionMismatch, "B must have between 1 and n columns");
  }
  if (alpha && alpha->size() != n) {
    throw Error(ErrorKind::DimensionMismatch,
                "alpha has " + std::to_string(alpha->size()) + " entries, expected " +
                    std::to_string(n));
  }
  if (!all_finite(A) || !all_finite(B) || (alpha && !alpha->allFinite())) {
    throw Error(ErrorKind::NonFinite, "system matrices must be finite");
  }
  if (!(rank_tol > 0.0 && rank_tol < 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "rank tolerance must lie in (0, 1)");
  }

  const int k = static_cast<int>(B.cols());
  if (const int rb = numerical_rank(B, rank_tol); rb < k) {
    throw Error(ErrorKind::RankDeficientB,
                "rank B = " + std::to_string(rb) + " < k = " + std::to_string(k));
  }

  const auto dims = growth_vector(A, B, rank_tol);
  if (dims.back() < n) throw NotControllableError(dims.back(), static_cast<int>(n));

  LinearSystem sys;
  sys.A_ = std::move(A);
  sys.B_ = std::move(B);
  sys.has_alpha_ = alpha.has_value();
  sys.alpha_ = alpha ? std::move(*alpha) : Eigen::VectorXd::Zero(n);
  sys.step_ = static_cast<int>(dims.size());
  sys.rank_tol_ = rank_tol;
  return sys;
}

LinearSystem change_coordinates(const LinearSystem& sys, const Eigen::Ref<const Eigen::MatrixXd>& C) {
  if (C.rows() != sys.n() || C.cols() != sys.n()) {
    throw Error(ErrorKind::DimensionMismatch, "coordinate change must be n x n");
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(C);
  Eigen::MatrixXd A = C * sys.A() * lu.inverse();
  Eigen::MatrixXd B = C * sys.B();
  std::optional<Eigen::VectorXd> alpha;
  if (sys.has_alpha()) alpha = C * sys.alpha();
  return validate_system(std::move(A), std::move(B), std::move(alpha), sys.rank_tolerance());
}

int Filtration::level_of(Eigen::Index j) const {
  for (int i = 0; i < step; ++i) {
    if (j < dims[i]) return i + 1;
  }
  return step;
}

Eigen::VectorXi Filtration::half_powers() const {
  Eigen::VectorXi p(dims.back());
  for (Eigen::Index j = 0; j < p.size(); ++j) p(j) = 2 * level_of(j) - 1;
  return p;
}

Filtration build_filtration(const LinearSystem& sys) {
  const Eigen::MatrixXd& A = sys.A();
  const Eigen::Index n = sys.n();

  Filtration f;
  f.dims = growth_vector(A, sys.B(), sys.rank_tolerance());
  f.step = static_cast<int>(f.dims.size());
  f.increments.resize(f.dims.size());
  for (std::size_t i = 0; i < f.dims.size(); ++i) {
    f.increments[i] = f.dims[i] - (i == 0 ? 0 : f.dims[i - 1]);
  }
  f.exponent = 0;
  for (int i = 1; i <= f.step; ++i) f.exponent += (2 * i - 1) * f.increments[i - 1];

  const int k = f.increments.front();
  f.rows.assign(k, 0);
  for (int j = 0; j < k; ++j) {
    for (int d : f.increments) {
      if (d > j) ++f.rows[j];
    }
  }

  // Pivoted Gram-Schmidt over the blocks B, AB, A^2B, ...: inside each block
  // take the candidate with the largest relative residual, d_i times.
  f.adapted_basis.resize(n, n);
  Eigen::Index filled = 0;
  Eigen::MatrixXd block = sys.B();
  for (int level = 1; level <= f.step; ++level) {
    Eigen::MatrixXd residual = block;
    Eigen::VectorXd norms = block.colwise().norm().transpose();
    for (int pass = 0; pass < 2; ++pass) {
      if (filled == 0) break;
      const auto Q = f.adapted_basis.leftCols(filled);
      residual -= Q * (Q.transpose() * residual);
    }
    for (int picked = 0; picked < f.increments[level - 1]; ++picked) {
      Eigen::Index best = 0;
      double best_ratio = -1.0;
      for (Eigen::Index c = 0; c < residual.cols(); ++c) {
        const double ratio = norms(c) > 0.0 ? residual.col(c).norm() / norms(c) : 0.0;
        if (ratio > best_ratio) {
          best_ratio = ratio;
          best = c;
        }
      }
      Eigen::VectorXd q = residual.col(best);
      for (int pass = 0; pass < 2; ++pass) {
        const auto Q = f.adapted_basis.leftCols(filled);
        q -= Q * (Q.transpose() * q);
      }
      q.normalize();
      f.adapted_basis.col(filled++) = q;
      residual -= q * (q.transpose() * residual);
    }
    block = A * block;
  }
  return f;
}

std::string Regime::label() const {
  if (is_equilibrium()) return "equilibrium";
  return "level-" + std::to_string(level);
}

Eigen::VectorXd effective_drift(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x0) {
  if (x0.size() != sys.n()) {
    throw Error(ErrorKind::DimensionMismatch, "point has wrong dimension");
  }
  return sys.A() * x0 + sys.alpha();
}

Regime classify_point(const LinearSystem& sys, const Filtration& filtration,
                      const Eigen::Ref<const Eigen::VectorXd>& x0) {
  const Eigen::VectorXd v = effective_drift(sys, x0);
  const double vnorm = v.norm();
  const double scale = 1.0 + sys.A().norm() * x0.norm() + sys.alpha().norm();
  if (vnorm <= kEquilibriumTolerance * scale) return Regime{0};

  const auto& P = filtration.adapted_basis;
  for (int level = 1; level <= filtration.step; ++level) {
    const auto Q = P.leftCols(filtration.dims[level - 1]);
    const double off = (v - Q * (Q.transpose() * v)).norm();
    if (off <= kMembershipTolerance * vnorm) return Regime{level};
  }
  return Regime{filtration.step};
}

Regime classify_point(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x0) {
  return classify_point(sys, build_filtration(sys), x0);
}

}  // namespace hypoheat
