#include "hypoheat/series.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "hypoheat/error.hpp"

namespace hypoheat {

namespace {

void require_nonempty(std::size_t size) {
  if (size == 0) throw Error(ErrorKind::DimensionMismatch, "series needs at least one coefficient");
}

}  // namespace

TruncatedSeries::TruncatedSeries(std::vector<double> coefficients) : c_(std::move(coefficients)) {
  require_nonempty(c_.size());
}

TruncatedSeries TruncatedSeries::constant(double c, int order) {
  std::vector<double> v(static_cast<std::size_t>(order) + 1, 0.0);
  v[0] = c;
  return TruncatedSeries(std::move(v));
}

TruncatedSeries TruncatedSeries::truncated(int order) const {
  std::vector<double> v(c_.begin(), c_.begin() + std::min<std::size_t>(c_.size(), order + 1));
  return TruncatedSeries(std::move(v));
}

double TruncatedSeries::evaluate(double t) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& rhs) const {
  const int h = std::min(order(), rhs.order());
  std::vector<double> v(h + 1);
  for (int i = 0; i <= h; ++i) v[i] = c_[i] + rhs.c_[i];
  return TruncatedSeries(std::move(v));
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& rhs) const { return *this + rhs * -1.0; }

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& rhs) const {
  const int h = std::min(order(), rhs.order());
  std::vector<double> v(h + 1, 0.0);
  for (int i = 0; i <= h; ++i) {
    for (int j = 0; j <= i; ++j) v[i] += c_[j] * rhs.c_[i - j];
  }
  return TruncatedSeries(std::move(v));
}

TruncatedSeries TruncatedSeries::operator*(double s) const {
  std::vector<double> v = c_;
  for (double& x : v) x *= s;
  return TruncatedSeries(std::move(v));
}

// g = exp(f): g' = f' g, so n g_n = sum_{j=1}^n j f_j g_{n-j}.
TruncatedSeries TruncatedSeries::exp() const {
  const int h = order();
  std::vector<double> g(h + 1, 0.0);
  g[0] = std::exp(c_[0]);
  for (int n = 1; n <= h; ++n) {
    double acc = 0.0;
    for (int j = 1; j <= n; ++j) acc += j * c_[j] * g[n - j];
    g[n] = acc / n;
  }
  return TruncatedSeries(std::move(g));
}

// g = log(f): f g' = f', so n f_0 g_n = n f_n - sum_{j=1}^{n-1} j g_j f_{n-j}.
TruncatedSeries TruncatedSeries::log() const {
  if (!(c_[0] > 0.0)) throw Error(ErrorKind::SeriesDegenerate, "log of a series needs c_0 > 0");
  const int h = order();
  std::vector<double> g(h + 1, 0.0);
  g[0] = std::log(c_[0]);
  for (int n = 1; n <= h; ++n) {
    double acc = n * c_[n];
    for (int j = 1; j < n; ++j) acc -= j * g[j] * c_[n - j];
    g[n] = acc / (n * c_[0]);
  }
  return TruncatedSeries(std::move(g));
}

TruncatedSeries TruncatedSeries::pow(double p) const { return (log() * p).exp(); }

TruncatedMatrixSeries::TruncatedMatrixSeries(std::vector<Eigen::MatrixXd> coefficients)
    : c_(std::move(coefficients)) {
  require_nonempty(c_.size());
  for (const auto& C : c_) {
    if (C.rows() != c_.front().rows() || C.cols() != c_.front().cols()) {
      throw Error(ErrorKind::DimensionMismatch, "series coefficients must share one shape");
    }
  }
}

TruncatedMatrixSeries TruncatedMatrixSeries::identity(Eigen::Index dim, int order) {
  std::vector<Eigen::MatrixXd> v(static_cast<std::size_t>(order) + 1, Eigen::MatrixXd::Zero(dim, dim));
  v[0].setIdentity();
  return TruncatedMatrixSeries(std::move(v));
}

TruncatedMatrixSeries TruncatedMatrixSeries::truncated(int order) const {
  std::vector<Eigen::MatrixXd> v(c_.begin(), c_.begin() + std::min<std::size_t>(c_.size(), order + 1));
  return TruncatedMatrixSeries(std::move(v));
}

Eigen::MatrixXd TruncatedMatrixSeries::evaluate(double t) const {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(rows(), cols());
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

TruncatedMatrixSeries TruncatedMatrixSeries::block(Eigen::Index row, Eigen::Index col, Eigen::Index rows,
                                                   Eigen::Index cols) const {
  std::vector<Eigen::MatrixXd> v;
  v.reserve(c_.size());
  for (const auto& C : c_) v.emplace_back(C.block(row, col, rows, cols));
  return TruncatedMatrixSeries(std::move(v));
}

TruncatedMatrixSeries TruncatedMatrixSeries::transpose() const {
  std::vector<Eigen::MatrixXd> v;
  v.reserve(c_.size());
  for (const auto& C : c_) v.emplace_back(C.transpose());
  return TruncatedMatrixSeries(std::move(v));
}

TruncatedMatrixSeries TruncatedMatrixSeries::operator+(const TruncatedMatrixSeries& rhs) const {
  const int h = std::min(order(), rhs.order());
  std::vector<Eigen::MatrixXd> v(h + 1);
  for (int i = 0; i <= h; ++i) v[i] = c_[i] + rhs.c_[i];
  return TruncatedMatrixSeries(std::move(v));
}

TruncatedMatrixSeries TruncatedMatrixSeries::operator-(const TruncatedMatrixSeries& rhs) const {
  return *this + rhs * -1.0;
}

TruncatedMatrixSeries TruncatedMatrixSeries::operator*(const TruncatedMatrixSeries& rhs) const {
  if (cols() != rhs.rows()) throw Error(ErrorKind::DimensionMismatch, "series product shape mismatch");
  const int h = std::min(order(), rhs.order());
  std::vector<Eigen::MatrixXd> v(h + 1, Eigen::MatrixXd::Zero(rows(), rhs.cols()));
  for (int i = 0; i <= h; ++i) {
    for (int j = 0; j <= i; ++j) v[i].noalias() += c_[j] * rhs.c_[i - j];
  }
  return TruncatedMatrixSeries(std::move(v));
}

TruncatedMatrixSeries TruncatedMatrixSeries::operator*(double s) const {
  std::vector<Eigen::MatrixXd> v = c_;
  for (auto& C : v) C *= s;
  return TruncatedMatrixSeries(std::move(v));
}

TruncatedMatrixSeries operator*(const Eigen::MatrixXd& lhs, const TruncatedMatrixSeries& rhs) {
  std::vector<Eigen::MatrixXd> v;
  v.reserve(rhs.c_.size());
  for (const auto& C : rhs.c_) v.emplace_back(lhs * C);
  return TruncatedMatrixSeries(std::move(v));
}

TruncatedMatrixSeries TruncatedMatrixSeries::operator*(const Eigen::MatrixXd& rhs) const {
  std::vector<Eigen::MatrixXd> v;
  v.reserve(c_.size());
  for (const auto& C : c_) v.emplace_back(C * rhs);
  return TruncatedMatrixSeries(std::move(v));
}

// R_0 = C_0^{-1}, R_q = -C_0^{-1} sum_{j=1}^q C_j R_{q-j}.
TruncatedMatrixSeries TruncatedMatrixSeries::inverse() const {
  if (rows() != cols()) throw Error(ErrorKind::DimensionMismatch, "only square series invert");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(c_[0]);
  if (!lu.isInvertible()) throw Error(ErrorKind::SeriesDegenerate, "leading coefficient is singular");
  const int h = order();
  std::vector<Eigen::MatrixXd> r(h + 1);
  r[0] = lu.inverse();
  for (int q = 1; q <= h; ++q) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(rows(), cols());
    for (int j = 1; j <= q; ++j) acc.noalias() += c_[j] * r[q - j];
    r[q] = -lu.solve(acc);
  }
  return TruncatedMatrixSeries(std::move(r));
}

TruncatedMatrixSeries TruncatedMatrixSeries::derivative() const {
  if (order() == 0) return TruncatedMatrixSeries({Eigen::MatrixXd::Zero(rows(), cols())});
  std::vector<Eigen::MatrixXd> v(order());
  for (int i = 1; i <= order(); ++i) v[i - 1] = c_[i] * static_cast<double>(i);
  return TruncatedMatrixSeries(std::move(v));
}

TruncatedSeries TruncatedMatrixSeries::trace() const {
  std::vector<double> v;
  v.reserve(c_.size());
  for (const auto& C : c_) v.push_back(C.trace());
  return TruncatedSeries(std::move(v));
}

// log(I + N) = N - N^2/2 + N^3/3 - ...; N^j = O(t^j) so j <= h suffices.
TruncatedSeries TruncatedMatrixSeries::log_det_identity_plus(const TruncatedMatrixSeries& N) {
  const int h = N.order();
  TruncatedMatrixSeries power = N;
  TruncatedSeries acc = power.trace();
  for (int j = 2; j <= h; ++j) {
    power = power * N;
    const double sign = (j % 2 == 0) ? -1.0 : 1.0;
    acc = acc + power.trace() * (sign / j);
  }
  return acc;
}

}  // namespace hypoheat
