#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace hypoheat {

/// Relative threshold on singular values used for every numerical rank.
inline constexpr double kDefaultRankTolerance = 1e-10;

/// Numerical rank of M: singular values above rel_tol * sigma_max.
int numerical_rank(const Eigen::Ref<const Eigen::MatrixXd>& M,
                   double rel_tol = kDefaultRankTolerance);

/**
 * A controllable linear system dx = (A x + alpha) dt + B dw.
 *
 * Instances only come out of validate_system(), so every LinearSystem in
 * circulation has rank B = k and satisfies the Kalman condition.
 */
class LinearSystem {
 public:
  const Eigen::MatrixXd& A() const noexcept { return A_; }
  const Eigen::MatrixXd& B() const noexcept { return B_; }
  /// The drift offset; the zero vector when none was supplied.
  const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
  bool has_alpha() const noexcept { return has_alpha_; }

  Eigen::Index n() const noexcept { return A_.rows(); }
  Eigen::Index k() const noexcept { return B_.cols(); }
  /// Minimal m with rank [B, AB, ..., A^{m-1}B] = n.
  int step() const noexcept { return step_; }
  double rank_tolerance() const noexcept { return rank_tol_; }

 private:
  friend LinearSystem validate_system(Eigen::MatrixXd, Eigen::MatrixXd,
                                      std::optional<Eigen::VectorXd>, double);
  LinearSystem() = default;

  Eigen::MatrixXd A_;
  Eigen::MatrixXd B_;
  Eigen::VectorXd alpha_;
  bool has_alpha_ = false;
  int step_ = 0;
  double rank_tol_ = kDefaultRankTolerance;
};

/// Checks shapes, finiteness, rank B = k and the Kalman condition.
/// Throws Error{DimensionMismatch | NonFinite | RankDeficientB} or
/// NotControllableError.
LinearSystem validate_system(Eigen::MatrixXd A, Eigen::MatrixXd B,
                             std::optional<Eigen::VectorXd> alpha = std::nullopt,
                             double rank_tol = kDefaultRankTolerance);

/// Same system seen in coordinates y = C x: (C A C^-1, C B, C alpha).
LinearSystem change_coordinates(const LinearSystem& sys,
                                const Eigen::Ref<const Eigen::MatrixXd>& C);

/**
 * The flag E_1 ⊂ ... ⊂ E_m = R^n with E_i = span{B, AB, ..., A^{i-1}B}.
 *
 * Levels are 1-based in the accessors below, matching how the flag is
 * usually indexed; the vectors are 0-based.
 */
struct Filtration {
  std::vector<int> dims;        ///< k_1 < k_2 < ... < k_m = n
  std::vector<int> increments;  ///< d_i = k_i - k_{i-1}, non-increasing
  int step = 0;                 ///< m
  std::vector<int> rows;        ///< Young diagram row lengths n_1 >= ... >= n_k
  int exponent = 0;             ///< sum_i (2i-1) d_i
  /// Orthonormal; the first k_i columns span E_i.
  Eigen::MatrixXd adapted_basis;

  /// k_{level-1}, i.e. the first coordinate index of block `level`.
  int block_offset(int level) const { return level == 1 ? 0 : dims[level - 2]; }
  int block_size(int level) const { return increments[level - 1]; }
  /// Level (1-based) of adapted coordinate j.
  int level_of(Eigen::Index j) const;
  /// Exponent of sqrt(t) scaling adapted coordinate j: 2i-1 at level i.
  Eigen::VectorXi half_powers() const;
};

Filtration build_filtration(const LinearSystem& sys);

/// Where the effective drift v = A x0 + alpha sits in the flag.
struct Regime {
  /// 0 means equilibrium (v = 0); otherwise the minimal i with v in E_i.
  int level = 0;

  bool is_equilibrium() const noexcept { return level == 0; }
  std::string label() const;

  friend bool operator==(const Regime&, const Regime&) = default;
};

inline constexpr double kEquilibriumTolerance = 1e-12;
inline constexpr double kMembershipTolerance = 1e-9;

/// Effective drift A x0 + alpha.
Eigen::VectorXd effective_drift(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x0);

Regime classify_point(const LinearSystem& sys, const Filtration& filtration,
                      const Eigen::Ref<const Eigen::VectorXd>& x0);
Regime classify_point(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x0);

}  // namespace hypoheat
