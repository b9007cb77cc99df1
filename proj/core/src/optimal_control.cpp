#include "hypoheat/optimal_control.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "hypoheat/error.hpp"
#include "hypoheat/gramian.hpp"

namespace hypoheat {

namespace {

void require_dimension(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& v, const char* what) {
  if (v.size() != sys.n()) throw Error(ErrorKind::DimensionMismatch, std::string(what) + " has wrong dimension");
}

// e^{-TA}(x2 - x1) - int_0^T e^{-sA} ds (A x1 + alpha), which equals
// e^{-TA} x2 - x1 - int_0^T e^{-sA} ds alpha.
Eigen::VectorXd steering_target(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x1,
                                const Eigen::Ref<const Eigen::VectorXd>& x2, double T) {
  return matrix_exponential(-T * sys.A()) * (x2 - x1) - integrated_flow(sys.A(), T) * effective_drift(sys, x1);
}

}  // namespace

ExtremalState extremal_flow(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& p0,
                            const Eigen::Ref<const Eigen::VectorXd>& x0, double t) {
  require_dimension(sys, p0, "p0");
  require_dimension(sys, x0, "x0");
  if (t == 0.0) return {p0, x0};
  const Eigen::MatrixXd E = matrix_exponential(t * sys.A());
  Eigen::VectorXd inner = x0 + gramian_signed(sys, t) * p0;
  if (sys.has_alpha()) inner += integrated_flow(sys.A(), t) * sys.alpha();
  return {matrix_exponential(-t * sys.A().transpose()) * p0, E * inner};
}

double hamiltonian(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& p,
                   const Eigen::Ref<const Eigen::VectorXd>& x) {
  return p.dot(sys.A() * x + sys.alpha()) + 0.5 * (sys.B().transpose() * p).squaredNorm();
}

Extremal::Extremal(LinearSystem sys, Eigen::VectorXd p0, Eigen::VectorXd x0)
    : sys_(std::move(sys)), p0_(std::move(p0)), x0_(std::move(x0)) {
  require_dimension(sys_, p0_, "p0");
  require_dimension(sys_, x0_, "x0");
}

Eigen::VectorXd Extremal::control(double t) const { return sys_.B().transpose() * (*this)(t).p; }

CovectorSolution connecting_covector(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x1,
                                     const Eigen::Ref<const Eigen::VectorXd>& x2, double T) {
  require_dimension(sys, x1, "x1");
  require_dimension(sys, x2, "x2");
  const GramianSolver solver(sys, T);
  return {solver.solve(steering_target(sys, x1, x2, T)), solver.small_time_route()};
}

ValueFunctionQuery value_function(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x1,
                                  const Eigen::Ref<const Eigen::VectorXd>& x2, double T) {
  require_dimension(sys, x1, "x1");
  require_dimension(sys, x2, "x2");
  const GramianSolver solver(sys, T);
  const Eigen::VectorXd target = steering_target(sys, x1, x2, T);

  ValueFunctionQuery q;
  q.x1 = x1;
  q.x2 = x2;
  q.T = T;
  q.p0 = solver.solve(target);
  if (solver.small_time_route()) {
    // Rebuild the target blockwise so the small components keep their digits.
    const auto& ex = *solver.expansion();
    const Eigen::VectorXd w = ex.basis().transpose() * (matrix_exponential(-T * sys.A()) * (x2 - x1)) -
                              ex.integrated_flow_adapted(T, effective_drift(sys, x1));
    q.S = 0.5 * solver.inverse_quadratic_adapted(w);
  } else {
    q.S = 0.5 * solver.inverse_quadratic(target);
  }
  q.ill_conditioned = solver.small_time_route();

  const Eigen::MatrixXd E = matrix_exponential(T * sys.A());
  const Eigen::VectorXd mean = E * (x1 + integrated_flow(sys.A(), T) * sys.alpha());
  Eigen::LLT<Eigen::MatrixXd> llt(covariance(sys, T));
  q.S_covariance_form = llt.info() == Eigen::Success
                            ? 0.5 * llt.matrixL().solve(x2 - mean).squaredNorm()
                            : std::numeric_limits<double>::quiet_NaN();
  return q;
}

double geodesic_cost(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& p0,
                     const Eigen::Ref<const Eigen::VectorXd>& x0, double t,
                     const Eigen::Ref<const Eigen::VectorXd>& x) {
  require_dimension(sys, p0, "p0");
  require_dimension(sys, x0, "x0");
  require_dimension(sys, x, "x");
  const GramianSolver solver(sys, t);
  const Eigen::VectorXd dx = x - x0;
  return -0.5 * solver.quadratic(p0) + p0.dot(dx) - 0.5 * solver.inverse_quadratic(dx);
}

}  // namespace hypoheat
