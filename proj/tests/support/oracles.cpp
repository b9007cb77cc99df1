#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "hypoheat/error.hpp"

namespace hypoheat::testing {

namespace {

Rule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double mu0) {
  const Eigen::Index n = diag.size();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  J.diagonal() = diag;
  for (Eigen::Index i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = offdiag(i);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule r;
  r.nodes = es.eigenvalues();
  r.weights = mu0 * es.eigenvectors().row(0).array().square().transpose();
  return r;
}

}  // namespace

Rule legendre_rule(int points, double a, double b) {
  Eigen::VectorXd off(points - 1);
  for (int i = 1; i < points; ++i) off(i - 1) = i / std::sqrt(4.0 * i * i - 1.0);
  Rule r = golub_welsch(Eigen::VectorXd::Zero(points), off, 2.0);
  r.nodes = (0.5 * (b - a)) * r.nodes.array() + 0.5 * (a + b);
  r.weights *= 0.5 * (b - a);
  return r;
}

Rule hermite_rule(int points) {
  Eigen::VectorXd off(points - 1);
  for (int i = 1; i < points; ++i) off(i - 1) = std::sqrt(static_cast<double>(i));
  return golub_welsch(Eigen::VectorXd::Zero(points), off, 1.0);
}

double gaussian_expectation(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& mean,
                            const Eigen::MatrixXd& cov, int points_per_dim) {
  const Eigen::Index n = mean.size();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const Eigen::MatrixXd L = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal();
  const Rule r = hermite_rule(points_per_dim);
  std::vector<int> idx(n, 0);
  double total = 0.0;
  Eigen::VectorXd z(n);
  while (true) {
    double w = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      z(j) = r.nodes(idx[j]);
      w *= r.weights(idx[j]);
    }
    total += w * f(mean + L * z);
    Eigen::Index j = 0;
    while (j < n && ++idx[j] == points_per_dim) idx[j++] = 0;
    if (j == n) break;
  }
  return total;
}

double integral_of_exp(const std::function<double(const Eigen::VectorXd&)>& log_f, const Eigen::VectorXd& mean,
                       const Eigen::MatrixXd& cov, int points_per_dim) {
  const Eigen::Index n = mean.size();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const Eigen::MatrixXd L = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal();
  const double log_jacobian = 0.5 * es.eigenvalues().array().log().sum() + 0.5 * n * std::log(2 * std::numbers::pi);
  const Rule r = hermite_rule(points_per_dim);
  std::vector<int> idx(n, 0);
  double total = 0.0;
  Eigen::VectorXd u(n);
  while (true) {
    double w = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      u(j) = r.nodes(idx[j]);
      w *= r.weights(idx[j]);
    }
    total += w * std::exp(log_f(mean + L * u) + 0.5 * u.squaredNorm() + log_jacobian);
    Eigen::Index j = 0;
    while (j < n && ++idx[j] == points_per_dim) idx[j++] = 0;
    if (j == n) break;
  }
  return total;
}

Eigen::MatrixXd gramian_by_quadrature(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double t) {
  const int panels = 16;
  const Rule r = legendre_rule(20, 0.0, t / panels);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(A.rows(), A.rows());
  for (int p = 0; p < panels; ++p) {
    for (Eigen::Index i = 0; i < r.nodes.size(); ++i) {
      const double s = p * t / panels + r.nodes(i);
      const Eigen::MatrixXd E = (-s * A).exp() * B;
      G += r.weights(i) * E * E.transpose();
    }
  }
  return G;
}

void hamiltonian_rk4(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::VectorXd& alpha,
                     Eigen::VectorXd& p, Eigen::VectorXd& x, double t, int steps) {
  const Eigen::MatrixXd BBt = B * B.transpose();
  const double h = t / steps;
  auto fp = [&](const Eigen::VectorXd& pp) -> Eigen::VectorXd { return -A.transpose() * pp; };
  auto fx = [&](const Eigen::VectorXd& pp, const Eigen::VectorXd& xx) -> Eigen::VectorXd {
    return A * xx + alpha + BBt * pp;
  };
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXd k1p = fp(p), k1x = fx(p, x);
    const Eigen::VectorXd k2p = fp(p + 0.5 * h * k1p), k2x = fx(p + 0.5 * h * k1p, x + 0.5 * h * k1x);
    const Eigen::VectorXd k3p = fp(p + 0.5 * h * k2p), k3x = fx(p + 0.5 * h * k2p, x + 0.5 * h * k2x);
    const Eigen::VectorXd k4p = fp(p + h * k3p), k4x = fx(p + h * k3p, x + h * k3x);
    p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
  }
}

double piecewise_constant_min_energy(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::VectorXd& x1,
                                     const Eigen::VectorXd& x2, double T, int pieces) {
  const Eigen::Index n = A.rows();
  const Eigen::Index k = B.cols();
  const double dt = T / pieces;
  // Column block j maps u_j to its contribution int e^{(T-s)A} B ds u_j.
  Eigen::MatrixXd Phi(n, k * pieces);
  for (int j = 0; j < pieces; ++j) {
    const Rule r = legendre_rule(12, j * dt, (j + 1) * dt);
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n, k);
    for (Eigen::Index i = 0; i < r.nodes.size(); ++i) block += r.weights(i) * ((T - r.nodes(i)) * A).exp() * B;
    Phi.middleCols(j * k, k) = block;
  }
  const Eigen::VectorXd r = x2 - (T * A).exp() * x1;
  const Eigen::MatrixXd PPt = Phi * Phi.transpose();
  return 0.5 * dt * r.dot(PPt.ldlt().solve(r));
}

std::vector<double> series_power(const std::vector<double>& f, double p, int order) {
  if (f.empty() || f[0] != 1.0) throw std::invalid_argument("series_power needs f_0 = 1");
  std::vector<double> g(order + 1, 0.0);
  g[0] = 1.0;
  for (int m = 1; m <= order; ++m) {
    double acc = 0.0;
    for (int j = 1; j <= m && j < static_cast<int>(f.size()); ++j) acc += ((p + 1.0) * j - m) * f[j] * g[m - j];
    g[m] = acc / m;
  }
  return g;
}

LinearSystem random_controllable(std::mt19937_64& rng, int n, int k, bool with_alpha, double margin) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pick_k(1, n);
  while (true) {
    const int kk = k > 0 ? k : pick_k(rng);
    Eigen::MatrixXd A(n, n), B(n, kk);
    for (int i = 0; i < A.size(); ++i) A.data()[i] = u(rng);
    for (int i = 0; i < B.size(); ++i) B.data()[i] = u(rng);
    // Kalman matrix rank, computed here rather than by the library.
    Eigen::MatrixXd K(n, n * kk);
    Eigen::MatrixXd P = B;
    for (int j = 0; j < n; ++j) {
      K.middleCols(j * kk, kk) = P;
      P = A * P;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(K);
    const auto& s = svd.singularValues();
    Eigen::JacobiSVD<Eigen::MatrixXd> svdB(B);
    const auto& sb = svdB.singularValues();
    if (s(n - 1) <= margin * s(0) || sb(kk - 1) <= margin * sb(0)) continue;
    std::optional<Eigen::VectorXd> alpha;
    if (with_alpha) {
      Eigen::VectorXd a(n);
      for (int i = 0; i < n; ++i) a(i) = u(rng);
      alpha = a;
    }
    try {
      return validate_system(A, B, alpha);
    } catch (const Error&) {
    }
  }
}

Eigen::MatrixXd random_well_conditioned(std::mt19937_64& rng, int n, double max_cond) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    Eigen::MatrixXd C(n, n);
    for (int i = 0; i < C.size(); ++i) C.data()[i] = u(rng);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
    const auto& s = svd.singularValues();
    if (s(n - 1) > 0 && s(0) / s(n - 1) <= max_cond) return C;
  }
}

double loglog_slope(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t m = t.size();
  Eigen::MatrixXd X(m, 2);
  Eigen::VectorXd Y(m);
  for (std::size_t i = 0; i < m; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = std::log(t[i]);
    Y(i) = std::log(std::abs(y[i]));
  }
  return X.colPivHouseholderQr().solve(Y)(1);
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(lo * std::pow(hi / lo, i / static_cast<double>(points - 1)));
  return g;
}

}  // namespace hypoheat::testing
