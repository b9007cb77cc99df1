#pragma once

#include <Eigen/Core>

#include "hypoheat/linear_system.hpp"

namespace hypoheat {

/// Minimum-energy steering for dx/dt = A x + alpha + B u with cost
/// (1/2) int |u|^2. Every extremal is determined by (p0, x0).

struct ExtremalState {
  Eigen::VectorXd p;
  Eigen::VectorXd x;
};

/// Closed-form solution of dp/dt = -A^T p, dx/dt = A x + alpha + B B^T p.
/// Any sign of t is allowed.
ExtremalState extremal_flow(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& p0,
                            const Eigen::Ref<const Eigen::VectorXd>& x0, double t);

/// p^T (A x + alpha) + (1/2) |B^T p|^2, conserved along extremals.
double hamiltonian(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& p,
                   const Eigen::Ref<const Eigen::VectorXd>& x);

class Extremal {
 public:
  Extremal(LinearSystem sys, Eigen::VectorXd p0, Eigen::VectorXd x0);

  const Eigen::VectorXd& p0() const noexcept { return p0_; }
  const Eigen::VectorXd& x0() const noexcept { return x0_; }

  ExtremalState operator()(double t) const { return extremal_flow(sys_, p0_, x0_, t); }
  /// The optimal control u(t) = B^T p(t).
  Eigen::VectorXd control(double t) const;

 private:
  LinearSystem sys_;
  Eigen::VectorXd p0_;
  Eigen::VectorXd x0_;
};

struct CovectorSolution {
  Eigen::VectorXd p0;
  /// Set when T < kSmallTime: Gamma_T is ill conditioned there and the solve
  /// went through the rescaled adapted frame.
  bool ill_conditioned = false;
};

/// The unique p0 whose extremal runs from x1 at time 0 to x2 at time T.
CovectorSolution connecting_covector(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x1,
                                     const Eigen::Ref<const Eigen::VectorXd>& x2, double T);

struct ValueFunctionQuery {
  Eigen::VectorXd x1;
  Eigen::VectorXd x2;
  double T = 0.0;
  /// S_T(x1, x2) = (1/2) p0^T Gamma_T p0.
  double S = 0.0;
  Eigen::VectorXd p0;
  /// (1/2)(x2 - mean)^T D_T^{-1} (x2 - mean), from a Cholesky factor of D_T.
  /// NaN when D_T is numerically singular.
  double S_covariance_form = 0.0;
  bool ill_conditioned = false;
};

ValueFunctionQuery value_function(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x1,
                                  const Eigen::Ref<const Eigen::VectorXd>& x2, double T);

/// Geodesic cost c_t(x) = -S_t(x, x(t)) along the extremal from (p0, x0),
/// evaluated in closed form.
double geodesic_cost(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& p0,
                     const Eigen::Ref<const Eigen::VectorXd>& x0, double t,
                     const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace hypoheat
