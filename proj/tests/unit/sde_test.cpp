#include "hypoheat/sde.hpp"

#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "hypoheat/error.hpp"
#include "hypoheat/philox.hpp"
#include "support/oracles.hpp"
#include "support/systems.hpp"

namespace hypoheat {
namespace {

using testing::brownian;
using testing::double_integrator;
using testing::scalar_ou;

void expect_kind(ErrorKind kind, auto&& fn) {
  try {
    fn();
    ADD_FAILURE() << "no error thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

GTEST_TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

GTEST_TEST(Philox, StreamsAreDeterministicAndDistinct) {
  PhiloxStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    EXPECT_EQ(va, b.next_u64());
    seen.insert(va);
    seen.insert(c.next_u64());
    seen.insert(d.next_u64());
  }
  EXPECT_EQ(seen.size(), 300u);
}

GTEST_TEST(Philox, UniformAndNormalMoments) {
  PhiloxStream s(1, 0);
  const int n = 200000;
  double su = 0, sz = 0, sz2 = 0, sz4 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = s.next_uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = s.next_normal();
    sz += z;
    sz2 += z * z;
    sz4 += z * z * z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sz / n, 0.0, 4 / std::sqrt(double(n)));
  EXPECT_NEAR(sz2 / n, 1.0, 4 * std::sqrt(2.0 / n));
  EXPECT_NEAR(sz4 / n, 3.0, 4 * std::sqrt(96.0 / n));
}

GTEST_TEST(Philox, NormalQuantile) {
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-15);
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-13);
  EXPECT_NEAR(normal_quantile(0.025), -1.959963984540054, 1e-13);
  EXPECT_NEAR(normal_quantile(1e-10), -6.361340902404056, 1e-10);
}

GTEST_TEST(SimulationConfig, Validation) {
  SimulationConfig c;
  EXPECT_NO_THROW(validate_config(c));
  c.dt = 0.0;
  expect_kind(ErrorKind::InvalidConfig, [&] { validate_config(c); });
  c.dt = 2.0;
  expect_kind(ErrorKind::InvalidConfig, [&] { validate_config(c); });
  c = {};
  c.n_paths = 1;
  expect_kind(ErrorKind::InvalidConfig, [&] { validate_config(c); });
  c = {};
  c.t_final = -1;
  expect_kind(ErrorKind::InvalidConfig, [&] { validate_config(c); });
  expect_kind(ErrorKind::InvalidConfig, [&] { parse_scheme("milstein"); });
  EXPECT_EQ(parse_scheme("euler"), Scheme::EulerMaruyama);
  EXPECT_EQ(parse_scheme("exact"), Scheme::ExactGaussianStep);
  EXPECT_EQ(parse_scheme(to_string(Scheme::EulerMaruyama)), Scheme::EulerMaruyama);
}

GTEST_TEST(SimulationConfig, StepCount) {
  SimulationConfig c;
  EXPECT_EQ(step_count(c), 100);
  c.dt = 0.3;
  EXPECT_EQ(step_count(c), 3);
  c.dt = 1.0;
  EXPECT_EQ(step_count(c), 1);
}

GTEST_TEST(Simulate, IndependentOfThreadCount) {
  SimulationConfig c;
  c.n_paths = 2000;
  c.dt = 0.1;
  c.seed = 99;
  const Eigen::Vector2d x0(0.5, -0.5);
  for (Scheme scheme : {Scheme::EulerMaruyama, Scheme::ExactGaussianStep}) {
    c.scheme = scheme;
    ::setenv("HYPOHEAT_THREADS", "1", 1);
    const Eigen::MatrixXd one = simulate(double_integrator(), x0, c);
    ::setenv("HYPOHEAT_THREADS", "3", 1);
    EXPECT_EQ(simulation_threads(), 3u);
    const Eigen::MatrixXd three = simulate(double_integrator(), x0, c);
    ::unsetenv("HYPOHEAT_THREADS");
    EXPECT_EQ(one, three);
    EXPECT_EQ(simulate(double_integrator(), x0, c), one);
  }
}

GTEST_TEST(Simulate, SeedChangesSamples) {
  SimulationConfig c;
  c.n_paths = 10;
  const Eigen::MatrixXd a = simulate(scalar_ou(), Eigen::VectorXd::Zero(1), c);
  c.seed = 1;
  EXPECT_NE(a, simulate(scalar_ou(), Eigen::VectorXd::Zero(1), c));
}

GTEST_TEST(Simulate, BrownianEndpoint) {
  SimulationConfig c;
  c.n_paths = 20000;
  c.dt = 0.25;
  c.scheme = Scheme::EulerMaruyama;
  const Eigen::Vector3d x0(1, 2, 3);
  const Eigen::MatrixXd s = simulate(brownian(3), x0, c);
  const auto r = moment_check(s, Eigen::VectorXd(x0), Eigen::MatrixXd::Identity(3, 3));
  EXPECT_TRUE(r.pass) << r.max_abs_z;
}

GTEST_TEST(Simulate, ExactStepMatchesClosedFormMoments) {
  SimulationConfig c;
  c.n_paths = 50000;
  c.dt = 0.1;
  c.seed = 5;
  const Eigen::Vector2d x0(1, 0);
  const Eigen::MatrixXd s = simulate(double_integrator(), x0, c);
  Eigen::Matrix2d D;
  D << 1, 0.5, 0.5, 1.0 / 3;
  const auto r = moment_check(s, Eigen::VectorXd(Eigen::Vector2d(1, 1)), Eigen::MatrixXd(D));
  EXPECT_TRUE(r.pass) << r.max_abs_z;

  // Scalar diffusion with a constant offset: mean e - 1 from 0.
  const Eigen::MatrixXd o = simulate(scalar_ou(1.0), Eigen::VectorXd::Zero(1), c);
  const auto ro = moment_check(o, Eigen::VectorXd::Constant(1, std::exp(1.0) - 1),
                               Eigen::MatrixXd::Constant(1, 1, (std::exp(2.0) - 1) / 2));
  EXPECT_TRUE(ro.pass) << ro.max_abs_z;
}

GTEST_TEST(Simulate, ExactStepOnRandomSystems) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 4; ++trial) {
    const auto sys = testing::random_controllable(rng, 2 + trial % 2, 0, true);
    SimulationConfig c;
    c.n_paths = 20000;
    c.dt = 0.25;
    c.seed = static_cast<std::uint64_t>(trial);
    const Eigen::VectorXd x0 = Eigen::VectorXd::LinSpaced(sys.n(), -0.5, 0.5);
    const auto r = moment_check(simulate(sys, x0, c), sys, x0, c.t_final);
    EXPECT_TRUE(r.pass) << r.max_abs_z;
  }
}

GTEST_TEST(Simulate, EulerMaruyamaBiasIsFirstOrder) {
  // Mean of the scheme is 10 (1 + h)^{1/h} against 10 e.
  SimulationConfig c;
  c.scheme = Scheme::EulerMaruyama;
  c.seed = 3;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(1, 10.0);
  const double exact = 10 * std::exp(1.0);
  c.dt = 0.01;
  const double coarse = exact - simulate(scalar_ou(), x0, c).mean();
  c.dt = 0.005;
  const double fine = exact - simulate(scalar_ou(), x0, c).mean();
  EXPECT_NEAR(coarse, exact - 10 * std::pow(1.01, 100), 0.03);
  const double ratio = fine / coarse;
  EXPECT_GT(ratio, 0.35);
  EXPECT_LT(ratio, 0.65);
}

GTEST_TEST(MomentCheck, DetectsWrongCovariance) {
  SimulationConfig c;
  c.seed = 11;
  const Eigen::Vector2d x0(0, 0);
  const Eigen::MatrixXd s = simulate(double_integrator(), x0, c);
  const auto good = moment_check(s, double_integrator(), x0, 1.0);
  EXPECT_TRUE(good.pass);
  EXPECT_LE(good.max_abs_z, kMomentThreshold);
  EXPECT_EQ(good.standardized_errors.size(), 5);
  const auto bad = moment_check(s, good.reference_mean, 1.2 * good.reference_cov);
  EXPECT_FALSE(bad.pass);
  EXPECT_GT(bad.max_abs_z, kMomentThreshold);
}

GTEST_TEST(MomentCheck, TooFewSamples) {
  const Eigen::MatrixXd s = Eigen::MatrixXd::Random(10, 2);
  expect_kind(ErrorKind::TooFewSamples, [&] { moment_check(s, double_integrator(), Eigen::Vector2d::Zero(), 1.0); });
}

GTEST_TEST(SamplesCsv, Layout) {
  Eigen::MatrixXd s(2, 2);
  s << 1.5, -2, 0.25, 3;
  std::ostringstream out;
  write_samples_csv(out, s);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x0,x1");
  std::getline(in, line);
  EXPECT_EQ(line, "1.5,-2");
  std::getline(in, line);
  EXPECT_EQ(line, "0.25,3");
}

}  // namespace
}  // namespace hypoheat
