#include "hypoheat/series.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "hypoheat/error.hpp"
#include "hypoheat/quadrature.hpp"
#include "support/oracles.hpp"

namespace hypoheat {
namespace {

std::vector<double> taylor_exp(double c, int order) {
  std::vector<double> out(order + 1);
  double term = 1.0;
  for (int i = 0; i <= order; ++i) {
    out[i] = term;
    term *= c / (i + 1);
  }
  return out;
}

GTEST_TEST(TruncatedSeries, ExpAndLogInvert) {
  const TruncatedSeries s({0.0, 1.0, 0.0, 0.0, 0.0, 0.0});
  const auto e = s.exp();
  const auto ref = taylor_exp(1.0, 5);
  for (int i = 0; i <= 5; ++i) EXPECT_NEAR(e[i], ref[i], 1e-15);
  const auto back = e.log();
  for (int i = 0; i <= 5; ++i) EXPECT_NEAR(back[i], s[i], 1e-14);
}

GTEST_TEST(TruncatedSeries, PowMatchesRecurrence) {
  // (e^{2t} - 1) / (2t) = sum (2t)^j / (j+1)!
  std::vector<double> f(9);
  double fact = 1.0;
  for (int j = 0; j <= 8; ++j) {
    fact *= (j + 1);
    f[j] = std::pow(2.0, j) / fact;
  }
  const auto g = TruncatedSeries(f).pow(-0.5);
  const auto ref = testing::series_power(f, -0.5, 8);
  for (int i = 0; i <= 8; ++i) EXPECT_NEAR(g[i], ref[i], 1e-14) << i;
}

GTEST_TEST(TruncatedSeries, ArithmeticAndEvaluate) {
  const TruncatedSeries a({1.0, 2.0, 3.0});
  const TruncatedSeries b({0.5, -1.0, 4.0});
  const auto p = a * b;
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.0);
  EXPECT_DOUBLE_EQ(p[2], 4.0 - 2.0 + 1.5);
  EXPECT_DOUBLE_EQ((a + b).evaluate(2.0), 1.5 + 2.0 + 28.0);
  EXPECT_DOUBLE_EQ((a - b)[2], -1.0);
  EXPECT_DOUBLE_EQ((a * 2.0)[1], 4.0);
  EXPECT_EQ(a.truncated(1).order(), 1);
}

GTEST_TEST(TruncatedMatrixSeries, InverseIsTwoSided) {
  Eigen::MatrixXd C0(2, 2), C1(2, 2), C2(2, 2);
  C0 << 2, 1, 1, 3;
  C1 << 0, 1, -1, 0.5;
  C2 << 1, 0, 0, -1;
  const TruncatedMatrixSeries S({C0, C1, C2});
  const auto Si = S.inverse();
  const auto left = Si * S;
  const auto right = S * Si;
  for (int i = 0; i <= 2; ++i) {
    const Eigen::MatrixXd expect = i == 0 ? Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2)) : Eigen::MatrixXd(Eigen::MatrixXd::Zero(2, 2));
    EXPECT_LT((left[i] - expect).norm(), 1e-13);
    EXPECT_LT((right[i] - expect).norm(), 1e-13);
  }
}

GTEST_TEST(TruncatedMatrixSeries, SingularLeadingTermThrows) {
  const TruncatedMatrixSeries S({Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Identity(2, 2)});
  try {
    S.inverse();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SeriesDegenerate);
  }
}

GTEST_TEST(TruncatedMatrixSeries, DerivativeTraceAndLogDet) {
  Eigen::MatrixXd N1(2, 2), N2(2, 2);
  N1 << 1, 2, 0, 3;
  N2 << 0.5, 0, 1, -1;
  const TruncatedMatrixSeries N({Eigen::MatrixXd::Zero(2, 2), N1, N2});
  const auto d = N.derivative();
  EXPECT_EQ(d.order(), 1);
  EXPECT_LT((d[0] - N1).norm(), 1e-15);
  EXPECT_LT((d[1] - 2 * N2).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(N.trace()[1], 4.0);
  // log det(I + N) against the log of the 2x2 determinant polynomial.
  const auto ld = TruncatedMatrixSeries::log_det_identity_plus(N);
  for (double t : {1e-3, 2e-3}) {
    const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(2, 2) + t * N1 + t * t * N2;
    // Order-2 truncation leaves O(t^3).
    EXPECT_NEAR(ld.evaluate(t), std::log(M.determinant()), 50 * t * t * t);
  }
}

GTEST_TEST(TruncatedMatrixSeries, BlockAndTranspose) {
  Eigen::MatrixXd C0 = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd C1(3, 3);
  C1 << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  const TruncatedMatrixSeries S({C0, C1});
  const auto b = S.block(1, 0, 2, 2);
  EXPECT_DOUBLE_EQ(b[1](0, 0), 4.0);
  EXPECT_DOUBLE_EQ(S.transpose()[1](0, 2), 7.0);
  const Eigen::MatrixXd M = Eigen::MatrixXd::Constant(3, 3, 2.0);
  EXPECT_LT(((M * S)[1] - M * C1).norm(), 1e-15);
  EXPECT_LT(((S * M)[1] - C1 * M).norm(), 1e-15);
}

GTEST_TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
  const QuadratureRule r = gauss_legendre(6, 0.0, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 11);
  EXPECT_NEAR(s, std::pow(2.0, 12) / 12.0, 1e-10);
}

GTEST_TEST(Quadrature, AdaptiveMatrixIntegral) {
  const Eigen::MatrixXd I = integrate_adaptive(
      [](double s) {
        Eigen::MatrixXd m(1, 2);
        m << std::exp(-s), std::sin(10 * s);
        return m;
      },
      0.0, 3.0);
  EXPECT_NEAR(I(0, 0), 1.0 - std::exp(-3.0), 1e-13);
  EXPECT_NEAR(I(0, 1), (1.0 - std::cos(30.0)) / 10.0, 1e-13);
}

}  // namespace
}  // namespace hypoheat
