#pragma once

#include <vector>

#include <Eigen/Core>

namespace hypoheat {

/**
 * Scalar power series c_0 + c_1 t + ... + c_h t^h, truncated at order h.
 *
 * Binary operations truncate to the smaller order of the two operands.
 */
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  explicit TruncatedSeries(std::vector<double> coefficients);
  static TruncatedSeries constant(double c, int order);

  int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
  double operator[](int i) const { return c_.at(static_cast<std::size_t>(i)); }
  const std::vector<double>& coefficients() const noexcept { return c_; }

  TruncatedSeries truncated(int order) const;
  double evaluate(double t) const;

  TruncatedSeries operator+(const TruncatedSeries& rhs) const;
  TruncatedSeries operator-(const TruncatedSeries& rhs) const;
  TruncatedSeries operator*(const TruncatedSeries& rhs) const;
  TruncatedSeries operator*(double s) const;

  /// exp of the series; the constant term contributes a factor e^{c_0}.
  TruncatedSeries exp() const;
  /// log of the series; requires c_0 > 0.
  TruncatedSeries log() const;
  /// (series)^p; requires c_0 > 0.
  TruncatedSeries pow(double p) const;

 private:
  std::vector<double> c_;
};

/// Square-matrix-valued power series C_0 + C_1 t + ... + C_h t^h.
class TruncatedMatrixSeries {
 public:
  TruncatedMatrixSeries() = default;
  explicit TruncatedMatrixSeries(std::vector<Eigen::MatrixXd> coefficients);
  static TruncatedMatrixSeries identity(Eigen::Index dim, int order);

  int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
  Eigen::Index rows() const { return c_.empty() ? 0 : c_.front().rows(); }
  Eigen::Index cols() const { return c_.empty() ? 0 : c_.front().cols(); }
  const Eigen::MatrixXd& operator[](int i) const { return c_.at(static_cast<std::size_t>(i)); }
  const std::vector<Eigen::MatrixXd>& coefficients() const noexcept { return c_; }

  TruncatedMatrixSeries truncated(int order) const;
  Eigen::MatrixXd evaluate(double t) const;
  TruncatedMatrixSeries block(Eigen::Index row, Eigen::Index col, Eigen::Index rows,
                              Eigen::Index cols) const;
  TruncatedMatrixSeries transpose() const;

  TruncatedMatrixSeries operator+(const TruncatedMatrixSeries& rhs) const;
  TruncatedMatrixSeries operator-(const TruncatedMatrixSeries& rhs) const;
  TruncatedMatrixSeries operator*(const TruncatedMatrixSeries& rhs) const;
  TruncatedMatrixSeries operator*(double s) const;
  /// Left/right multiplication by a constant matrix.
  friend TruncatedMatrixSeries operator*(const Eigen::MatrixXd& lhs, const TruncatedMatrixSeries& rhs);
  TruncatedMatrixSeries operator*(const Eigen::MatrixXd& rhs) const;

  /// S^{-1} with S S^{-1} = I + O(t^{h+1}). Throws SeriesDegenerate when C_0
  /// is singular.
  TruncatedMatrixSeries inverse() const;
  /// d/dt; the result has order h-1.
  TruncatedMatrixSeries derivative() const;
  TruncatedSeries trace() const;
  /// log det(I + N) = tr log(I + N) for a series N with N_0 = 0.
  static TruncatedSeries log_det_identity_plus(const TruncatedMatrixSeries& N);

 private:
  std::vector<Eigen::MatrixXd> c_;
};

}  // namespace hypoheat
