#include "hypoheat/sde.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Cholesky>

#include "hypoheat/error.hpp"
#include "hypoheat/gramian.hpp"
#include "hypoheat/heat_kernel.hpp"
#include "hypoheat/philox.hpp"

namespace hypoheat {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::EulerMaruyama:
      return "euler-maruyama";
    case Scheme::ExactGaussianStep:
      return "exact";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "euler" || name == "euler-maruyama") return Scheme::EulerMaruyama;
  if (name == "exact") return Scheme::ExactGaussianStep;
  throw Error(ErrorKind::InvalidConfig, "unknown scheme '" + std::string(name) + "'");
}

void validate_config(const SimulationConfig& c) {
  if (c.n_paths < 2) throw Error(ErrorKind::InvalidConfig, "n_paths must be >= 2");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw Error(ErrorKind::InvalidConfig, "dt must be positive");
  if (!(c.t_final > 0.0) || !std::isfinite(c.t_final)) {
    throw Error(ErrorKind::InvalidConfig, "t_final must be positive");
  }
  if (c.dt > c.t_final) throw Error(ErrorKind::InvalidConfig, "dt exceeds t_final");
}

long step_count(const SimulationConfig& c) {
  return std::max(1L, std::lround(c.t_final / c.dt));
}

unsigned simulation_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HYPOHEAT_THREADS")) {
    unsigned v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    if (auto [p, ec] = std::from_chars(env, end, v); ec == std::errc() && p == end && v > 0) return v;
  }
  return hw;
}

namespace {

template <class Body>
void parallel_for(long count, Body body) {
  const long threads = std::min<long>(simulation_threads(), std::max(1L, count / 256));
  if (threads <= 1) {
    body(0L, count);
    return;
  }
  std::vector<std::thread> pool;
  const long chunk = (count + threads - 1) / threads;
  for (long begin = 0; begin < count; begin += chunk) {
    pool.emplace_back(body, begin, std::min(count, begin + chunk));
  }
  for (auto& th : pool) th.join();
}

}  // namespace

Eigen::MatrixXd simulate(const LinearSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x0,
                         const SimulationConfig& config) {
  validate_config(config);
  if (x0.size() != sys.n()) throw Error(ErrorKind::DimensionMismatch, "x0 has wrong dimension");

  const Eigen::Index n = sys.n();
  const long steps = step_count(config);
  const double h = config.t_final / static_cast<double>(steps);

  // One step is xi -> F xi + c + L z.
  Eigen::MatrixXd F;
  Eigen::VectorXd c;
  Eigen::MatrixXd L;
  Eigen::Index noise_dim = 0;
  if (config.scheme == Scheme::EulerMaruyama) {
    F = Eigen::MatrixXd::Identity(n, n) + h * sys.A();
    c = h * sys.alpha();
    L = std::sqrt(h) * sys.B();
    noise_dim = sys.k();
  } else {
    F = matrix_exponential(h * sys.A());
    c = F * drift_integral(sys, h);
    Eigen::LLT<Eigen::MatrixXd> llt(covariance(sys, h));
    if (llt.info() != Eigen::Success) throw Error(ErrorKind::SeriesDegenerate, "step covariance not positive definite");
    L = llt.matrixL();
    noise_dim = n;
  }

  Eigen::MatrixXd samples(config.n_paths, n);
  parallel_for(config.n_paths, [&](long begin, long end) {
    Eigen::VectorXd xi(n);
    Eigen::VectorXd z(noise_dim);
    for (long path = begin; path < end; ++path) {
      PhiloxStream rng(config.seed, static_cast<std::uint64_t>(path));
      xi = x0;
      for (long s = 0; s < steps; ++s) {
        for (Eigen::Index j = 0; j < noise_dim; ++j) z(j) = rng.next_normal();
        xi = F * xi + c + L * z;
      }
      samples.row(path) = xi.transpose();
    }
  });
  return samples;
}

void write_samples_csv(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& samples) {
  for (Eigen::Index j = 0; j < samples.cols(); ++j) out << (j ? ",x" : "x") << j;
  out << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    for (Eigen::Index j = 0; j < samples.cols(); ++j) {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, samples(i, j));
      if (j) out << ',';
      out.write(buf, p - buf);
    }
    out << '\n';
  }
}

MomentReport moment_check(const Eigen::Ref<const Eigen::MatrixXd>& samples, const Eigen::VectorXd& reference_mean,
                          const Eigen::MatrixXd& reference_cov) {
  const Eigen::Index N = samples.rows();
  const Eigen::Index n = samples.cols();
  if (N < kMinMomentSamples) {
    throw Error(ErrorKind::TooFewSamples,
                "moment check needs at least " + std::to_string(kMinMomentSamples) + " samples, got " +
                    std::to_string(N));
  }
  if (reference_mean.size() != n || reference_cov.rows() != n || reference_cov.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "reference moments do not match the sample dimension");
  }

  MomentReport r;
  r.reference_mean = reference_mean;
  r.reference_cov = reference_cov;
  r.sample_mean = samples.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rowwise() - r.sample_mean.transpose();
  r.sample_cov = (centered.transpose() * centered) / static_cast<double>(N - 1);
  r.sample_cov = 0.5 * (r.sample_cov + r.sample_cov.transpose()).eval();

  const double Nd = static_cast<double>(N);
  const auto& D = reference_cov;
  r.standardized_errors.resize(n + n * (n + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    r.standardized_errors(k++) = (r.sample_mean(j) - reference_mean(j)) / std::sqrt(D(j, j) / Nd);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = j; l < n; ++l) {
      const double se = std::sqrt((D(j, j) * D(l, l) + D(j, l) * D(j, l)) / Nd);
      r.standardized_errors(k++) = (r.sample_cov(j, l) - D(j, l)) / se;
    }
  }
  r.max_abs_z = r.standardized_errors.cwiseAbs().maxCoeff();
  r.pass = std::isfinite(r.max_abs_z) && r.max_abs_z <= r.threshold;
  return r;
}

MomentReport moment_check(const Eigen::Ref<const Eigen::MatrixXd>& samples, const LinearSystem& sys,
                          const Eigen::Ref<const Eigen::VectorXd>& x0, double t) {
  if (samples.cols() != sys.n()) throw Error(ErrorKind::DimensionMismatch, "samples have wrong dimension");
  return moment_check(samples, transition_mean(sys, t, x0), covariance(sys, t));
}

}  // namespace hypoheat
