#include "hypoheat/cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypoheat/cli/system_io.hpp"
#include "hypoheat/curvature.hpp"
#include "hypoheat/error.hpp"
#include "hypoheat/gramian.hpp"
#include "hypoheat/heat_kernel.hpp"
#include "hypoheat/optimal_control.hpp"
#include "hypoheat/sde.hpp"

namespace hypoheat::cli {

namespace {

using nlohmann::json;

enum class Format { Json, Text, Csv };

Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "text") return Format::Text;
  if (s == "csv") return Format::Csv;
  throw Error(ErrorKind::InvalidConfig, "unknown format '" + s + "'");
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

json to_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string point_label(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ";" : "") + num(v(i));
  return s;
}

double max_abs(const Eigen::MatrixXd& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

// Named tolerances, overridable with --tol name=value.
class Tolerances {
 public:
  explicit Tolerances(std::map<std::string, double> defaults) : values_(std::move(defaults)) {}

  void apply(const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::InvalidConfig, "--tol expects name=value, got '" + o + "'");
      const std::string name = o.substr(0, eq);
      if (!values_.count(name)) throw Error(ErrorKind::InvalidConfig, "unknown tolerance '" + name + "'");
      double v = 0.0;
      const char* b = o.data() + eq + 1;
      const char* e = o.data() + o.size();
      auto [p, ec] = std::from_chars(b, e, v);
      if (ec != std::errc() || p != e || !(v >= 0.0)) {
        throw Error(ErrorKind::InvalidConfig, "bad tolerance value in '" + o + "'");
      }
      values_[name] = v;
    }
  }
  double operator[](const std::string& name) const { return values_.at(name); }

 private:
  std::map<std::string, double> values_;
};

class Checks {
 public:
  void add(std::string name, double residual, double tolerance) {
    const bool pass = std::isfinite(residual) && residual <= tolerance;
    all_ &= pass;
    json v;
    v["name"] = std::move(name);
    v["residual"] = residual;
    v["tolerance"] = tolerance;
    v["pass"] = pass;
    list_.push_back(std::move(v));
  }
  bool all_pass() const { return all_; }
  const json& list() const { return list_; }

 private:
  json list_ = json::array();
  bool all_ = true;
};

// Text rendering: one "path = value" line per leaf, numeric arrays inline.
bool numeric_tree(const json& j) {
  if (j.is_number() || j.is_null()) return true;
  if (!j.is_array()) return false;
  return std::all_of(j.begin(), j.end(), [](const json& e) { return numeric_tree(e); });
}

std::string inline_value(const json& j) {
  if (j.is_number_float()) return num(j.get<double>());
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "null";
  if (j.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + inline_value(j[i]);
    return s + "]";
  }
  return j.dump();
}

void render_text(std::ostream& out, const json& j, const std::string& path) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "name" && !path.empty() && path.back() == ']') continue;
      render_text(out, it.value(), path.empty() ? it.key() : path + "." + it.key());
    }
  } else if (j.is_array() && !numeric_tree(j)) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      const json& e = j[i];
      const std::string tag = e.is_object() && e.contains("name") ? e["name"].get<std::string>() : std::to_string(i);
      render_text(out, e, path + "[" + tag + "]");
    }
  } else {
    out << path << " = " << inline_value(j) << '\n';
  }
}

void emit(std::ostream& out, const json& report, Format format, const std::vector<std::string>& csv_header,
          const std::vector<std::vector<std::string>>& csv_rows) {
  switch (format) {
    case Format::Json:
      out << report.dump(2) << '\n';
      break;
    case Format::Text:
      render_text(out, report, "");
      break;
    case Format::Csv:
      for (std::size_t i = 0; i < csv_header.size(); ++i) out << (i ? "," : "") << csv_header[i];
      out << '\n';
      for (const auto& row : csv_rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
      }
      break;
  }
}

std::vector<std::vector<std::string>> checks_csv(const json& list) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& v : list) {
    rows.push_back({v["name"].get<std::string>(), inline_value(v["residual"]), inline_value(v["tolerance"]),
                    v["pass"].get<bool>() ? "PASS" : "FAIL"});
  }
  return rows;
}

json system_json(const LinearSystem& sys) {
  json s;
  s["A"] = to_json(sys.A());
  s["B"] = to_json(sys.B());
  s["alpha"] = sys.has_alpha() ? to_json(sys.alpha()) : json(nullptr);
  s["n"] = sys.n();
  s["k"] = sys.k();
  return s;
}

json filtration_json(const Filtration& f) {
  json j;
  j["dims"] = f.dims;
  j["increments"] = f.increments;
  j["step"] = f.step;
  j["N"] = f.exponent;
  j["young_rows"] = f.rows;
  json diagram = json::array();
  for (int r : f.rows) diagram.push_back(std::string(static_cast<std::size_t>(r), '#'));
  j["young_diagram"] = diagram;
  return j;
}

json curvature_json(const CurvatureExpansion& c) {
  json j;
  j["order"] = c.order;
  j["I"] = to_json(c.I);
  j["trace_I"] = c.trace_I();
  json Q = json::array();
  json traces = json::array();
  for (int i = 0; i <= c.order; ++i) {
    Q.push_back(to_json(c.Q[i]));
    traces.push_back(c.trace_Q(i));
  }
  j["Q"] = Q;
  j["trace_Q"] = traces;
  return j;
}

void require_point_size(const LinearSystem& sys, const Eigen::VectorXd& x, const std::string& what) {
  if (x.size() != sys.n()) {
    throw Error(ErrorKind::DimensionMismatch, what + " has " + std::to_string(x.size()) + " entries, expected " +
                                                  std::to_string(sys.n()));
  }
}

// ---------------------------------------------------------------- commands

struct Common {
  std::string system_file;
  std::string format;
  int order = kDefaultCurvatureOrder;
  std::vector<std::string> tol;
};

int cmd_analyze(const Common& c, const std::vector<std::string>& point_args, std::ostream& out) {
  if (c.order < 1) throw Error(ErrorKind::InvalidConfig, "--order must be >= 1");
  const LinearSystem sys = load_system(c.system_file);
  std::vector<Eigen::VectorXd> points;
  for (const auto& p : point_args) {
    points.push_back(parse_point(p));
    require_point_size(sys, points.back(), "--point");
  }
  Tolerances tol({{"trace_I", 1e-7},
                  {"trace_XinvY", 1e-8},
                  {"reflection", 1e-9},
                  {"quadrature", 1e-9},
                  {"a1", 1e-9},
                  {"a_formula", 1e-9},
                  {"a_determinant", 1e-8},
                  {"extrapolation", kExtrapolationTolerance}});
  tol.apply(c.tol);

  const Filtration f = build_filtration(sys);
  const double trace_A = sys.A().trace();
  const GramianSeries gs = rescaled_series(sys, f, std::max(c.order, 2));
  const CurvatureExpansion curv = laurent_expansion(sys, f, c.order);
  const std::vector<double> a = equilibrium_coefficients(trace_A, curv, c.order).coefficients();
  const std::vector<double> a_det =
      det_covariance_expansion(gs, trace_A, c.order).factor.pow(-0.5).coefficients();
  const auto low = low_order_coefficients(trace_A, curv.trace_Q(0), curv.trace_Q(1));

  Checks checks;
  checks.add("trace_I_equals_N", std::abs(curv.trace_I() - f.exponent), tol["trace_I"]);
  const Eigen::MatrixXd XinvY = gs.X().llt().solve(gs.Y());
  checks.add("trace_XinvY_plus_trace_A", std::abs(XinvY.trace() + trace_A), tol["trace_XinvY"]);
  for (double t : {0.1, 1.0}) {
    const Eigen::MatrixXd D = covariance(sys, t);
    checks.add("D_plus_Gamma_minus_t(t=" + num(t) + ")",
               max_abs(D + gramian_signed(sys, -t)) / std::max(1.0, max_abs(D)), tol["reflection"]);
  }
  {
    const Eigen::MatrixXd G = gramian(sys, 1.0);
    checks.add("gramian_closed_form_vs_quadrature(t=1)", max_abs(G - gramian_quadrature(sys, 1.0)) / max_abs(G),
               tol["quadrature"]);
  }
  checks.add("a1_equals_minus_half_trace_A", std::abs(a[1] + 0.5 * trace_A), tol["a1"]);
  {
    double r = 0.0;
    for (int i = 1; i <= std::min(3, c.order); ++i) r = std::max(r, std::abs(a[i] - low[i - 1]));
    checks.add("a_low_order_formula_vs_series", r, tol["a_formula"]);
  }
  {
    double r = 0.0;
    for (int i = 0; i <= c.order; ++i) r = std::max(r, std::abs(a[i] - a_det[i]) / std::max(1.0, std::abs(a[i])));
    checks.add("a_series_vs_determinant", r, tol["a_determinant"]);
  }

  json point_reports = json::array();
  for (const auto& x0 : points) {
    json pr;
    pr["x0"] = to_json(x0);
    const Regime regime = classify_point(sys, f, x0);
    pr["regime"] = regime.label();
    pr["N"] = f.exponent;
    pr["c0"] = gs.c0;
    if (regime.level <= 1) pr["a"] = a;
    if (regime.level == 1) pr["first_order"] = diagonal_asymptotics(sys, x0, c.order).first_order;
    if (regime.level >= 2) {
      pr["level"] = regime.level;
      const std::string name = "pole_extrapolation(x0=" + point_label(x0) + ")";
      try {
        const KernelAsymptotics k = diagonal_asymptotics(sys, x0, c.order);
        pr["C"] = k.C;
        pr["C_correction"] = k.C_correction;
        pr["C_estimates"] = k.C_estimates;
        const double prev = k.C_estimates[k.C_estimates.size() - 2];
        checks.add(name, std::abs(k.C - prev) / std::abs(k.C), tol["extrapolation"]);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ExtrapolationUnstable) throw;
        pr["error"] = e.what();
        checks.add(name, std::numeric_limits<double>::quiet_NaN(), tol["extrapolation"]);
      }
    }
    point_reports.push_back(std::move(pr));
  }

  json report;
  report["system"] = system_json(sys);
  report["filtration"] = filtration_json(f);
  report["curvature"] = curvature_json(curv);
  report["c0"] = gs.c0;
  report["a"] = a;
  report["points"] = point_reports;
  report["verifications"] = checks.list();
  report["status"] = checks.all_pass() ? "PASS" : "FAIL";

  emit(out, report, parse_format(c.format.empty() ? "json" : c.format), {"name", "residual", "tolerance", "status"},
       checks_csv(checks.list()));
  return checks.all_pass() ? kExitPass : kExitFail;
}

int cmd_kernel(const Common& c, double t, const std::string& xs, const std::string& ys, std::ostream& out) {
  const LinearSystem sys = load_system(c.system_file);
  const Eigen::VectorXd x = parse_point(xs);
  const Eigen::VectorXd y = parse_point(ys);
  require_point_size(sys, x, "--x");
  require_point_size(sys, y, "--y");
  const HeatKernel kernel(sys);
  const auto parts = kernel.parts(t, x, y);
  const double log_det = parts.log_det_ratio + kernel.filtration().exponent * std::log(t);
  const double log_p = kernel.log_density(t, x, y);
  const double S = value_function(sys, x, y, t).S;

  json report;
  report["t"] = t;
  report["x"] = to_json(x);
  report["y"] = to_json(y);
  report["density"] = std::exp(log_p);
  report["log_density"] = log_p;
  report["S"] = S;
  report["log_det_D"] = log_det;
  report["det_D"] = std::exp(log_det);
  emit(out, report, parse_format(c.format.empty() ? "json" : c.format),
       {"t", "density", "log_density", "S", "log_det_D", "det_D"},
       {{num(t), num(std::exp(log_p)), num(log_p), num(S), num(log_det), num(std::exp(log_det))}});
  return kExitPass;
}

int cmd_cost(const Common& c, double t, const std::string& xs, const std::string& ys, std::ostream& out) {
  const LinearSystem sys = load_system(c.system_file);
  const Eigen::VectorXd x = parse_point(xs);
  const Eigen::VectorXd y = parse_point(ys);
  require_point_size(sys, x, "--x");
  require_point_size(sys, y, "--y");
  const ValueFunctionQuery q = value_function(sys, x, y, t);
  json report;
  report["T"] = t;
  report["x1"] = to_json(x);
  report["x2"] = to_json(y);
  report["S"] = q.S;
  report["S_covariance_form"] = q.S_covariance_form;
  report["p0"] = to_json(q.p0);
  report["ill_conditioned"] = q.ill_conditioned;
  emit(out, report, parse_format(c.format.empty() ? "json" : c.format),
       {"T", "S", "S_covariance_form", "p0", "ill_conditioned"},
       {{num(t), num(q.S), num(q.S_covariance_form), point_label(q.p0), q.ill_conditioned ? "true" : "false"}});
  return kExitPass;
}

int cmd_curvature(const Common& c, bool check, std::ostream& out) {
  if (c.order < 0) throw Error(ErrorKind::InvalidConfig, "--order must be >= 0");
  const LinearSystem sys = load_system(c.system_file);
  Tolerances tol({{"oracle", 1e-4}});
  tol.apply(c.tol);
  const Filtration f = build_filtration(sys);
  const CurvatureExpansion curv = laurent_expansion(sys, f, c.order);

  json report = curvature_json(curv);
  report["N"] = f.exponent;
  bool pass = true;
  if (check) {
    // Geometric grid on [1e-3, 1e-1] with a few more points than unknowns.
    const int points = std::max(12, c.order + 6);
    std::vector<double> grid;
    for (int i = 0; i < points; ++i) grid.push_back(1e-3 * std::pow(100.0, i / static_cast<double>(points - 1)));
    const CurvatureFit fit = finite_difference_oracle(sys, c.order, grid);
    const double diff = std::max(max_abs(fit.estimate.I - curv.I), max_abs(fit.estimate.Q[0] - curv.Q[0]));
    Checks checks;
    checks.add("oracle_I_and_Q0", diff, tol["oracle"]);
    pass = checks.all_pass();
    json o = curvature_json(fit.estimate);
    o["grid"] = grid;
    o["residual_rms"] = fit.residual_rms;
    o["condition"] = fit.condition;
    report["oracle"] = o;
    report["verifications"] = checks.list();
    report["status"] = pass ? "PASS" : "FAIL";
  }

  std::vector<std::vector<std::string>> rows;
  auto add_matrix = [&](const std::string& name, const Eigen::MatrixXd& M) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      for (Eigen::Index j = 0; j < M.cols(); ++j) rows.push_back({name, std::to_string(i), std::to_string(j), num(M(i, j))});
    }
  };
  add_matrix("I", curv.I);
  for (int i = 0; i <= curv.order; ++i) add_matrix("Q" + std::to_string(i), curv.Q[i]);
  emit(out, report, parse_format(c.format.empty() ? "json" : c.format), {"coefficient", "row", "col", "value"}, rows);
  return pass ? kExitPass : kExitFail;
}

int cmd_sweep(const Common& c, const std::string& point, double t_min, double t_max, int n_points, std::ostream& out) {
  if (c.order < 1) throw Error(ErrorKind::InvalidConfig, "--order must be >= 1");
  if (n_points < 2) throw Error(ErrorKind::InvalidConfig, "--n must be >= 2");
  if (!(t_min > 0.0) || !(t_max > t_min)) throw Error(ErrorKind::InvalidConfig, "need 0 < t-min < t-max");
  const LinearSystem sys = load_system(c.system_file);
  const Eigen::VectorXd x = parse_point(point);
  require_point_size(sys, x, "--point");

  const HeatKernel kernel(sys);
  const OffDiagonalAsymptotics asym(sys, x, x, c.order);
  json rows = json::array();
  std::vector<std::vector<std::string>> csv;
  for (int i = 0; i < n_points; ++i) {
    const double t = t_min * std::pow(t_max / t_min, i / static_cast<double>(n_points - 1));
    const double p = kernel.density(t, x, x);
    const double approx = asym.approximate(t);
    const double residual = asym.residual(t);
    const double S = asym.cost(t);
    rows.push_back({{"t", t}, {"p_exact", p}, {"p_asym", approx}, {"normalized_residual", residual}, {"S_t", S}});
    csv.push_back({num(t), num(p), num(approx), num(residual), num(S)});
  }
  json report;
  report["point"] = to_json(x);
  report["order"] = c.order;
  report["a"] = asym.a();
  report["N"] = asym.N();
  report["c0"] = asym.c0();
  report["rows"] = rows;
  emit(out, report, parse_format(c.format.empty() ? "csv" : c.format),
       {"t", "p_exact", "p_asym", "normalized_residual", "S_t"}, csv);
  return kExitPass;
}

int cmd_simulate(const Common& c, const std::string& point, const SimulationConfig& config,
                 const std::string& samples_csv, std::ostream& out) {
  const LinearSystem sys = load_system(c.system_file);
  const Eigen::VectorXd x0 = parse_point(point);
  require_point_size(sys, x0, "--point");
  const Eigen::MatrixXd samples = simulate(sys, x0, config);
  if (!samples_csv.empty()) {
    std::ofstream f(samples_csv);
    if (!f) throw Error(ErrorKind::InvalidConfig, "cannot write '" + samples_csv + "'");
    write_samples_csv(f, samples);
  }
  const MomentReport r = moment_check(samples, sys, x0, config.t_final);

  json report;
  report["config"] = {{"n_paths", config.n_paths}, {"dt", config.dt}, {"steps", step_count(config)},
                      {"t_final", config.t_final}, {"seed", config.seed},
                      {"scheme", std::string(to_string(config.scheme))}};
  report["x0"] = to_json(x0);
  report["sample_mean"] = to_json(r.sample_mean);
  report["sample_cov"] = to_json(r.sample_cov);
  report["reference_mean"] = to_json(r.reference_mean);
  report["reference_cov"] = to_json(r.reference_cov);
  report["standardized_errors"] = to_json(r.standardized_errors);
  report["max_abs_z"] = r.max_abs_z;
  report["threshold"] = r.threshold;
  report["status"] = r.pass ? "PASS" : "FAIL";

  std::vector<std::vector<std::string>> rows;
  Eigen::Index k = 0;
  const Eigen::Index n = sys.n();
  for (Eigen::Index j = 0; j < n; ++j, ++k) {
    rows.push_back({"mean", std::to_string(j), num(r.sample_mean(j)), num(r.reference_mean(j)),
                    num(r.standardized_errors(k))});
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = j; l < n; ++l, ++k) {
      rows.push_back({"cov", std::to_string(j) + ";" + std::to_string(l), num(r.sample_cov(j, l)),
                      num(r.reference_cov(j, l)), num(r.standardized_errors(k))});
    }
  }
  emit(out, report, parse_format(c.format.empty() ? "json" : c.format), {"quantity", "index", "sample", "reference", "z"},
       rows);
  return r.pass ? kExitPass : kExitFail;
}

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch:
    case ErrorKind::RankDeficientB:
    case ErrorKind::NotControllable:
    case ErrorKind::NonPositiveTime:
    case ErrorKind::InvalidConfig:
    case ErrorKind::TooFewSamples:
    case ErrorKind::ParseError:
      return true;
    default:
      return false;
  }
}

void add_common(CLI::App* sub, Common& c, bool with_order, bool with_tol) {
  sub->add_option("system", c.system_file, "System file (JSON)")->required();
  sub->add_option("--format", c.format, "Output format: json, text or csv");
  if (with_order) sub->add_option("--order", c.order, "Expansion order h");
  if (with_tol) sub->add_option("--tol", c.tol, "Tolerance override name=value (repeatable)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Small-time analysis of linear hypoelliptic heat kernels", "hypoheat"};
  app.require_subcommand(1);

  Common common;
  std::vector<std::string> points;
  std::string x = "";
  std::string y = "";
  double t = 1.0;
  double t_min = 1e-3;
  double t_max = 1e-1;
  int n_points = 20;
  bool check = false;
  SimulationConfig config;
  std::string scheme = "exact";
  std::string samples_csv;

  auto* analyze = app.add_subcommand("analyze", "Filtration, curvature, asymptotics and self-checks");
  add_common(analyze, common, true, true);
  analyze->add_option("--point", points, "Point x0 as comma-separated values (repeatable)");

  auto* kernel = app.add_subcommand("kernel", "Exact heat kernel p(t, x, y)");
  add_common(kernel, common, false, false);
  kernel->add_option("--t", t, "Time")->required();
  kernel->add_option("--x", x, "Start point")->required();
  kernel->add_option("--y", y, "End point")->required();

  auto* cost = app.add_subcommand("cost", "Minimum control energy S_T(x1, x2)");
  add_common(cost, common, false, false);
  cost->add_option("--t", t, "Horizon T")->required();
  cost->add_option("--x", x, "Start point")->required();
  cost->add_option("--y", y, "End point")->required();

  auto* curvature = app.add_subcommand("curvature", "Laurent coefficients of Q(t)");
  add_common(curvature, common, true, true);
  curvature->add_flag("--check", check, "Compare with the least-squares fit of sampled Q(t)");

  auto* sweep = app.add_subcommand("sweep", "Exact versus asymptotic kernel on a geometric t-grid");
  add_common(sweep, common, true, false);
  sweep->add_option("--point", x, "Point x0")->required();
  sweep->add_option("--t-min", t_min, "Smallest time");
  sweep->add_option("--t-max", t_max, "Largest time");
  sweep->add_option("--n", n_points, "Number of grid points");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo check of the transition moments");
  add_common(sim, common, false, false);
  sim->add_option("--point", x, "Start point x0")->required();
  sim->add_option("--paths", config.n_paths, "Number of paths");
  sim->add_option("--dt", config.dt, "Time step");
  sim->add_option("--t", config.t_final, "Horizon");
  sim->add_option("--seed", config.seed, "Random seed");
  sim->add_option("--scheme", scheme, "exact or euler");
  sim->add_option("--samples-csv", samples_csv, "Write endpoint samples to this file");

  std::vector<const char*> argv{"hypoheat"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(common, points, out);
    if (kernel->parsed()) return cmd_kernel(common, t, x, y, out);
    if (cost->parsed()) return cmd_cost(common, t, x, y, out);
    if (curvature->parsed()) return cmd_curvature(common, check, out);
    if (sweep->parsed()) return cmd_sweep(common, x, t_min, t_max, n_points, out);
    if (sim->parsed()) {
      config.scheme = parse_scheme(scheme);
      return cmd_simulate(common, x, config, samples_csv, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_input_error(e.kind()) ? kExitUsage : kExitFail;
  }
  return kExitUsage;
}

}  // namespace hypoheat::cli
