#include "hypoheat/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "hypoheat/error.hpp"
#include "hypoheat/optimal_control.hpp"

namespace hypoheat {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

void require_point(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() != sys.n()) throw Error(ErrorKind::DimensionMismatch, "point has wrong dimension");
}

double polynomial(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

// Diagonal of the Richardson table for samples g(t0 / 2^j) of a function
// with an expansion in integer powers of t.
std::vector<double> richardson_diagonal(const std::vector<double>& samples) {
  std::vector<std::vector<double>> R(samples.size());
  std::vector<double> diag;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    R[j].push_back(samples[j]);
    for (std::size_t l = 1; l <= j; ++l) {
      const double f = std::ldexp(1.0, static_cast<int>(l));
      R[j].push_back((f * R[j][l - 1] - R[j - 1][l - 1]) / (f - 1.0));
    }
    diag.push_back(R[j][j]);
  }
  return diag;
}

}  // namespace

Eigen::VectorXd drift_integral(const LinearSystem& sys, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::NonPositiveTime, "drift integral needs t > 0");
  const Eigen::Index n = sys.n();
  if (!sys.has_alpha()) return Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n + 1, n + 1);
  H.topLeftCorner(n, n) = -sys.A();
  H.topRightCorner(n, 1) = sys.alpha();
  return matrix_exponential(H * t).topRightCorner(n, 1);
}

Eigen::VectorXd transition_mean(const LinearSystem& sys, double t, const Eigen::Ref<const Eigen::VectorXd>& x) {
  require_point(sys, x);
  return matrix_exponential(t * sys.A()) * (x + drift_integral(sys, t));
}

HeatKernel::HeatKernel(LinearSystem sys)
    : sys_(std::move(sys)),
      filtration_(build_filtration(sys_)),
      expansion_(std::make_shared<const AdaptedExpansion>(sys_, filtration_)) {}

HeatKernel::Parts HeatKernel::parts(double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                                    const Eigen::Ref<const Eigen::VectorXd>& y) const {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::NonPositiveTime, "kernel needs t > 0");
  require_point(sys_, x);
  require_point(sys_, y);
  const double N_log_t = filtration_.exponent * std::log(t);

  Parts out;
  if (t >= kSmallTime) {
    const Eigen::MatrixXd D = covariance(sys_, t);
    Eigen::LLT<Eigen::MatrixXd> llt(D);
    if (llt.info() == Eigen::Success && direct_route_allowed(D, t)) {
      const Eigen::VectorXd d = Eigen::MatrixXd(llt.matrixL()).diagonal();
      const Eigen::VectorXd r = y - transition_mean(sys_, t, x);
      out.exponent = -0.5 * llt.matrixL().solve(r).squaredNorm();
      out.log_det_ratio = 2.0 * d.array().log().sum() - N_log_t;
      return out;
    }
    if (t > kExpansionHorizon) throw Error(ErrorKind::SeriesDegenerate, "D_t is not positive definite");
  }

  // (y - mean)^T D_t^{-1} (y - mean) = w^T Gamma_t^{-1} w with
  // w = e^{-tA}(y - x) - int_0^t e^{-sA} ds (A x + alpha).
  const GramianSolver solver(sys_, t, expansion_);
  const auto& P = expansion_->basis();
  Eigen::VectorXd w = -expansion_->integrated_flow_adapted(t, effective_drift(sys_, x));
  if (x != y) w += P.transpose() * (matrix_exponential(-t * sys_.A()) * (y - x));
  out.exponent = -0.5 * solver.inverse_quadratic_adapted(w);
  out.log_det_ratio = 2.0 * t * sys_.A().trace() + (solver.log_det() - N_log_t);
  return out;
}

double HeatKernel::log_density(double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y) const {
  const Parts p = parts(t, x, y);
  return p.exponent - 0.5 * (p.log_det_ratio + filtration_.exponent * std::log(t)) -
         0.5 * static_cast<double>(sys_.n()) * kLog2Pi;
}

double HeatKernel::density(double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& y) const {
  return std::exp(log_density(t, x, y));
}

double HeatKernel::normalized(double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                              const Eigen::Ref<const Eigen::VectorXd>& y, double c0) const {
  return std::exp(log_normalized(t, x, y, c0));
}

double HeatKernel::log_normalized(double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                                  const Eigen::Ref<const Eigen::VectorXd>& y, double c0) const {
  const Parts p = parts(t, x, y);
  return p.exponent - 0.5 * (p.log_det_ratio - std::log(c0));
}

double exact_kernel(const LinearSystem& sys, double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& y) {
  return HeatKernel(sys).density(t, x, y);
}

std::array<double, 3> low_order_coefficients(double trace_A, double trace_Q0, double trace_Q1) {
  const double a = trace_A;
  return {
      -a / 2.0,
      a * a / 8.0 + trace_Q0 / 4.0,
      -trace_Q1 / 12.0 - a * trace_Q0 / 8.0 - a * a * a / 48.0,
  };
}

TruncatedSeries equilibrium_coefficients(double trace_A, const CurvatureExpansion& curvature, int order) {
  if (order < 1) throw Error(ErrorKind::InvalidConfig, "expansion order must be >= 1");
  if (curvature.order < order - 2) {
    throw Error(ErrorKind::InvalidConfig, "curvature expansion is too short for the requested order");
  }
  std::vector<double> e(order + 1, 0.0);
  e[1] = -0.5 * trace_A;
  for (int i = 0; i + 2 <= order; ++i) {
    const double sign = (i % 2 == 0) ? -1.0 : 1.0;  // (-1)^{i+1}
    e[i + 2] = -0.5 * sign * curvature.trace_Q(i) / ((i + 1.0) * (i + 2.0));
  }
  return TruncatedSeries(std::move(e)).exp();
}

double KernelAsymptotics::leading(double t) const {
  return std::exp(-0.5 * N * std::log(t) - 0.5 * static_cast<double>(n) * kLog2Pi - 0.5 * std::log(c0));
}

double KernelAsymptotics::approximate(double t) const {
  if (regime.is_equilibrium()) return leading(t) * polynomial(a, t);
  if (regime.level == 1) return leading(t) * (1.0 - first_order * t);
  return leading(t) * std::exp(-C / std::pow(t, 2 * level - 3));
}

KernelAsymptotics diagonal_asymptotics(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x0,
                                       int order) {
  if (order < 1) throw Error(ErrorKind::InvalidConfig, "expansion order must be >= 1");
  require_point(sys, x0);
  const HeatKernel kernel(sys);
  const Filtration& f = kernel.filtration();
  const double trace_A = sys.A().trace();

  KernelAsymptotics out;
  out.regime = classify_point(sys, f, x0);
  out.order = order;
  out.N = f.exponent;
  out.n = sys.n();

  const AdaptedExpansion ex(sys, f, order);
  const GramianSeries gs = ex.series(std::max(order, 2));
  out.c0 = gs.c0;

  if (out.regime.level <= 1) {
    const CurvatureExpansion curvature = laurent_expansion(sys, f, std::max(order - 2, 0));
    out.a = equilibrium_coefficients(trace_A, curvature, order).coefficients();
    out.a_from_determinant = det_covariance_expansion(gs, trace_A, order).factor.pow(-0.5).coefficients();
  }

  if (out.regime.level == 1) {
    const Eigen::VectorXd v = effective_drift(sys, x0);
    const Eigen::VectorXd y = sys.B().colPivHouseholderQr().solve(v);
    out.first_order = 0.5 * trace_A + 0.5 * y.squaredNorm();
  }

  if (out.regime.level >= 2) {
    out.level = out.regime.level;
    const int pole = 2 * out.level - 3;
    constexpr int kGridPoints = 8;
    constexpr double kCoarsest = 0.02;
    std::vector<double> ts;
    std::vector<double> g;
    for (int j = 0; j < kGridPoints; ++j) {
      const double t = std::ldexp(kCoarsest, -j);
      ts.push_back(t);
      g.push_back(-std::pow(t, pole) * kernel.parts(t, x0, x0).exponent);
    }
    out.C_estimates = richardson_diagonal(g);
    out.C = out.C_estimates.back();
    const double previous = out.C_estimates[out.C_estimates.size() - 2];
    if (!(out.C > 0.0) || std::abs(out.C - previous) > kExtrapolationTolerance * std::abs(out.C)) {
      throw Error(ErrorKind::ExtrapolationUnstable,
                  "pole coefficient estimates " + std::to_string(previous) + " and " + std::to_string(out.C));
    }
    std::vector<double> slope;
    for (std::size_t j = 0; j < ts.size(); ++j) slope.push_back((g[j] - out.C) / ts[j]);
    out.C_correction = richardson_diagonal(slope).back();
  }
  return out;
}

OffDiagonalAsymptotics::OffDiagonalAsymptotics(const LinearSystem& sys, Eigen::VectorXd x, Eigen::VectorXd y,
                                               int order)
    : kernel_(sys), x_(std::move(x)), y_(std::move(y)) {
  if (order < 1) throw Error(ErrorKind::InvalidConfig, "expansion order must be >= 1");
  require_point(sys, x_);
  require_point(sys, y_);
  const Filtration& f = kernel_.filtration();
  const CurvatureExpansion curvature = laurent_expansion(sys, f, std::max(order - 2, 0));
  a_ = equilibrium_coefficients(sys.A().trace(), curvature, order).coefficients();
  N_ = f.exponent;
  c0_ = kernel_.expansion()->series(2).c0;
}

double OffDiagonalAsymptotics::cost(double t) const { return value_function(kernel_.system(), x_, y_, t).S; }

double OffDiagonalAsymptotics::approximate(double t) const {
  const double n = static_cast<double>(kernel_.system().n());
  const double log_lead = -0.5 * N_ * std::log(t) - 0.5 * n * kLog2Pi - 0.5 * std::log(c0_);
  return std::exp(log_lead - cost(t)) * polynomial(a_, t);
}

double OffDiagonalAsymptotics::residual(double t) const {
  const auto p = kernel_.parts(t, x_, y_);
  return std::exp(p.exponent + cost(t) - 0.5 * (p.log_det_ratio - std::log(c0_))) - polynomial(a_, t);
}

OffDiagonalAsymptotics offdiagonal_asymptotics(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x,
                                               const Eigen::Ref<const Eigen::VectorXd>& y, int order) {
  return OffDiagonalAsymptotics(sys, x, y, order);
}

}  // namespace hypoheat
