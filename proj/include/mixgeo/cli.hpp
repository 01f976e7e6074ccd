#pragma once

// Batch front-end: JSON configs in, CSV out. Each command writes to a single
// stream; run_command maps errors onto the exit-code contract
// (0 ok, 2 config/validation, 3 numerical/assumption failure).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixgeo/mixgeo.hpp"

namespace mixgeo::cli {

using json = nlohmann::json;

struct Options {
  double tol = kDefaultTol;
  std::uint64_t seed = 12345;
};

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Comma-separated rows with LF line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(std::initializer_list<std::string_view> names) {
    bool first = true;
    for (auto n : names) {
      if (!first) out_ << ',';
      out_ << n;
      first = false;
    }
    out_ << '\n';
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      out_ << fmt(values[i]);
    }
    out_ << '\n';
  }

  void pair(std::string_view key, double value) { out_ << key << ',' << fmt(value) << '\n'; }

 private:
  std::ostream& out_;
};

// ---------------------------------------------------------------------------
// config parsing

[[noreturn]] inline void config_error(const std::string& what) { fail(ErrorKind::ConfigError, what); }

inline const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) config_error(std::string("missing key '") + key + "'");
  return obj.at(key);
}

inline double get_number(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number()) config_error(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

inline double get_number(const json& obj, const char* key, double fallback) {
  return obj.contains(key) ? get_number(obj, key) : fallback;
}

inline std::vector<double> get_numbers(const json& v, const char* what) {
  if (!v.is_array()) config_error(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) config_error(std::string(what) + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

/// {"dim": n, "real": [...], "imag": [...]} in row-major order; "imag" may be
/// omitted for real matrices.
inline ComplexMatrix parse_matrix(const json& v, const char* what) {
  const json& dim_v = require(v, "dim");
  if (!dim_v.is_number_integer() || dim_v.get<long>() < 1) {
    config_error(std::string(what) + ".dim must be a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(dim_v.get<long>());
  const auto re = get_numbers(require(v, "real"), what);
  std::vector<double> im(re.size(), 0.0);
  if (v.contains("imag")) im = get_numbers(v.at("imag"), what);
  const auto count = static_cast<std::size_t>(n * n);
  if (re.size() != count || im.size() != count) {
    config_error(std::string(what) + " needs dim^2 real and imag entries");
  }
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto idx = static_cast<std::size_t>(i * n + j);
      m(i, j) = Complex(re[idx], im[idx]);
    }
  return m;
}

inline ComplexMatrix parse_hermitian(const json& v, const char* what, double tol) {
  ComplexMatrix m = parse_matrix(v, what);
  if (!is_hermitian(m, tol)) fail(ErrorKind::NotHermitian, std::string(what) + " is not Hermitian");
  return m;
}

inline DensityOperator parse_density(const json& v, const char* what, double tol) {
  return DensityOperator(parse_matrix(v, what), tol);
}

/// {"start": a, "stop": b, "points": n} or an explicit array of times.
inline std::vector<double> parse_grid(const json& v, const char* what) {
  std::vector<double> g;
  if (v.is_array()) {
    g = get_numbers(v, what);
  } else {
    const json& pts = require(v, "points");
    if (!pts.is_number_integer() || pts.get<long>() < 1) {
      config_error(std::string(what) + ".points must be a positive integer");
    }
    const auto n = static_cast<std::size_t>(pts.get<long>());
    const double a = get_number(v, "start");
    if (n == 1) {
      g = {a};
    } else {
      g = linspace(a, get_number(v, "stop"), n);
    }
  }
  if (g.empty()) config_error(std::string(what) + " is empty");
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(g[i] > g[i - 1])) config_error(std::string(what) + " must be strictly increasing");
  }
  return g;
}

inline std::string get_string(const json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) config_error(std::string("'") + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

// ---------------------------------------------------------------------------
// metric-path

inline void cmd_metric_path(const json& cfg, const Options& opt, std::ostream& out) {
  const std::string family = get_string(cfg, "family", "unitary");
  AlignedPath path;
  if (family == "unitary") {
    const DensityOperator rho0 = parse_density(require(cfg, "rho0"), "rho0", opt.tol);
    const ComplexMatrix h = parse_hermitian(require(cfg, "H"), "H", opt.tol);
    if (h.rows() != rho0.dim()) config_error("H and rho0 dimensions differ");
    const std::vector<double> grid = parse_grid(require(cfg, "grid"), "grid");
    path = unitary_path(rho0, h, grid);
  } else if (family == "tabulated") {
    const std::vector<double> times = parse_grid(require(cfg, "times"), "times");
    const json& states = require(cfg, "states");
    if (!states.is_array() || states.size() != times.size()) {
      config_error("'states' must hold one matrix per time");
    }
    std::vector<DensityOperator> rhos;
    for (const auto& s : states) rhos.push_back(parse_density(s, "states[]", opt.tol));
    for (const auto& r : rhos) {
      if (r.dim() != rhos.front().dim()) config_error("tabulated states differ in dimension");
    }
    path = sample_path(
        [&](double t) {
          const auto it = std::lower_bound(times.begin(), times.end(), t);
          return rhos[static_cast<std::size_t>(it - times.begin())];
        },
        times);
  } else {
    config_error("unknown family '" + family + "'");
  }
  if (path.size() < 3) config_error("metric-path needs at least 3 grid points");

  CsvWriter csv(out);
  csv.header({"t", "ds2_discrete", "ds2_differential", "fubini_study", "fisher_rao", "speed"});
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    const LineElementBreakdown le = differential_line_element(path, i);
    double fs = 0.0;
    for (double term : le.fubini_study_terms) fs += term;
    const double dt = path.times[i + 1] - path.times[i];
    csv.row({path.times[i], line_element_sq(path.decomps[i], path.decomps[i + 1]), le.total, fs,
             le.fisher_rao, std::sqrt(le.total) / dt});
  }
}

// ---------------------------------------------------------------------------
// geodesic

inline void cmd_geodesic(const json& cfg, const Options&, std::ostream& out) {
  CsvWriter csv(out);
  if (get_string(cfg, "preset", "") == "figure2") {
    csv.header({"r1", "theta12", "theta", "x", "z"});
    for (const auto& s : figure2_dataset()) csv.row({s.r1, s.theta12, s.theta, s.x, s.z});
    return;
  }
  const GeodesicSpec spec{get_number(cfg, "r1"), get_number(cfg, "r2"), get_number(cfg, "theta12")};
  spec.validate();
  const double pts = get_number(cfg, "points", 201);
  if (pts < 3 || pts != std::floor(pts)) config_error("'points' must be an integer >= 3");
  const NumericGeodesic g = numeric_geodesic(spec, static_cast<std::size_t>(pts));
  const double closed_len = geodesic_length(spec);
  csv.header({"theta", "r_closed", "r_numeric", "x", "z", "length_closed", "length_numeric"});
  for (std::size_t j = 0; j < g.theta.size(); ++j) {
    const double r = geodesic_r(spec, g.theta[j]);
    csv.row({g.theta[j], r, g.r[j], r * std::sin(g.theta[j]), r * std::cos(g.theta[j]), closed_len,
             g.length});
  }
}

// ---------------------------------------------------------------------------
// bures

struct BuresComparison {
  double overlap_route = 0.0;   // 2 - 2 Tr|M|
  double fidelity_route = 0.0;  // 2 - 2 Tr sqrt(sqrt(rho) sigma sqrt(rho))
  double spectral = 0.0;        // line_element_sq with branches paired by descending p
};

inline BuresComparison compare_bures(const DensityOperator& rho, const DensityOperator& sigma) {
  const SpectralDecomposition a = decompose(rho);
  const SpectralDecomposition b = decompose(sigma);
  BuresComparison c;
  c.overlap_route = bures_line_element_sq(a, b);
  c.fidelity_route = 2.0 - 2.0 * uhlmann_fidelity(rho, sigma);
  c.spectral = line_element_sq(a, b);
  return c;
}

inline void cmd_bures(const json& cfg, const Options& opt, std::ostream& out) {
  CsvWriter csv(out);
  if (cfg.contains("fuzz")) {
    const json& fz = cfg.at("fuzz");
    const double count = get_number(fz, "count", 500);
    const double min_dim = get_number(fz, "min_dim", 2);
    const double max_dim = get_number(fz, "max_dim", 6);
    if (count < 1 || min_dim < 1 || max_dim < min_dim || max_dim > 64) {
      config_error("invalid fuzz parameters");
    }
    Rng rng(opt.seed);
    std::uniform_int_distribution<int> dim_dist(static_cast<int>(min_dim), static_cast<int>(max_dim));
    double max_gap = 0.0;
    int violations = 0;
    for (int i = 0; i < static_cast<int>(count); ++i) {
      const Eigen::Index n = dim_dist(rng);
      const DensityOperator rho = random_density(rng, n);
      const DensityOperator sigma = random_density(rng, n);
      const BuresComparison c = compare_bures(rho, sigma);
      max_gap = std::max(max_gap, std::abs(c.overlap_route - c.fidelity_route));
      if (c.overlap_route > c.spectral + 1e-12) ++violations;
    }
    csv.header({"cases", "max_route_discrepancy", "ordering_violations"});
    csv.row({count, max_gap, static_cast<double>(violations)});
    return;
  }
  const json& pairs = require(cfg, "pairs");
  if (!pairs.is_array() || pairs.empty()) config_error("'pairs' must be a non-empty array");
  csv.header({"pair", "bures_overlap_route", "bures_fidelity_route", "route_discrepancy",
              "spectral_line_element", "ordering_ok"});
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const DensityOperator rho = parse_density(require(pairs[i], "rho"), "rho", opt.tol);
    const DensityOperator sigma = parse_density(require(pairs[i], "sigma"), "sigma", opt.tol);
    if (rho.dim() != sigma.dim()) config_error("pair dimensions differ");
    const BuresComparison c = compare_bures(rho, sigma);
    csv.row({static_cast<double>(i), c.overlap_route, c.fidelity_route,
             std::abs(c.overlap_route - c.fidelity_route), c.spectral,
             c.overlap_route <= c.spectral + 1e-12 ? 1.0 : 0.0});
  }
}

// ---------------------------------------------------------------------------
// interfere

inline double visibility_residual(const DensityOperator& rho, const ComplexMatrix& h, double dt) {
  const double avg = dispersions(rho, h).avg_dispersion_sq;
  return maximize_P0(rho, h, dt).p0_max - (1.0 - 0.25 * avg * dt * dt);
}

inline void cmd_interfere(const json& cfg, const Options& opt, std::ostream& out) {
  const DensityOperator rho = parse_density(require(cfg, "rho"), "rho", opt.tol);
  const ComplexMatrix h = parse_hermitian(require(cfg, "H"), "H", opt.tol);
  if (h.rows() != rho.dim()) config_error("H and rho dimensions differ");
  const double dt = get_number(cfg, "delta_t");
  const SpectralDecomposition d = decompose(rho);
  std::vector<double> phases(d.rank(), 0.0);
  if (cfg.contains("phases")) phases = get_numbers(cfg.at("phases"), "phases");
  if (phases.size() != d.rank()) config_error("'phases' needs one entry per eigenvector");

  CsvWriter csv(out);
  out << "quantity,value\n";
  const InterferenceResult r = run_unitary(rho, h, dt, phases);
  csv.pair("P0", r.p0);
  csv.pair("P0_closed_form", r.p0_closed_form);
  csv.pair("P1", r.p1);
  const VisibilityMaximum vm = maximize_P0(rho, h, dt);
  csv.pair("P0max", vm.p0_max);
  for (std::size_t k = 0; k < vm.phases.size(); ++k) csv.pair("fstar_" + std::to_string(k), vm.phases[k]);
  const double avg = dispersions(d, h).avg_dispersion_sq;
  csv.pair("avg_dispersion_sq", avg);
  csv.pair("predicted_P0max", 1.0 - 0.25 * avg * dt * dt);
  if (dt != 0.0) {
    const double res = visibility_residual(rho, h, dt);
    const double res_half = visibility_residual(rho, h, 0.5 * dt);
    csv.pair("residual", res);
    csv.pair("residual_half_step", res_half);
    if (res_half != 0.0) {
      csv.pair("residual_ratio", res / res_half);
      csv.pair("residual_order", std::log2(std::abs(res / res_half)));
    }
  }

  if (get_string(cfg, "mode", "unitary") == "purified") {
    const std::vector<double> dp = get_numbers(require(cfg, "delta_p"), "delta_p");
    if (dp.size() != d.rank()) config_error("'delta_p' needs one entry per eigenvector");
    const ComplexMatrix u = unitary_exp(h, dt);
    const NonunitaryStep step{dp, u, optimal_phases(d, u)};
    const PurifiedResult pr = run_purified(d, step);
    double fisher = 0.0;
    for (std::size_t k = 0; k < d.rank(); ++k) fisher += dp[k] * dp[k] / d.probs[k];
    csv.pair("P0_purified", pr.p0);
    csv.pair("fisher_rao_addition", 0.25 * fisher);
    csv.pair("predicted_loss", predicted_visibility_loss(d, h, dt, dp));
    csv.pair("actual_loss", 1.0 - pr.p0);
  }
}

// ---------------------------------------------------------------------------
// thermal-scan

inline MagneticModel parse_model(const json& m) {
  const std::string type = get_string(m, "type", "chain");
  if (type == "single_spin") return single_spin(0.0);
  if (type != "chain") config_error("unknown model type '" + type + "'");
  const double n = get_number(m, "n");
  if (n != std::floor(n)) config_error("'n' must be an integer");
  ChainParams p;
  p.coupling = get_number(m, "J", 1.0);
  p.anisotropy = get_number(m, "anisotropy", 1.0);
  p.transverse = get_number(m, "transverse", 0.0);
  return build_spin_chain(static_cast<int>(n), p);
}

inline double relative_error(double value, double reference) {
  const double diff = std::abs(value - reference);
  if (diff == 0.0) return 0.0;
  return diff / std::max(std::abs(reference), 1e-300);
}

inline void cmd_thermal_scan(const json& cfg, const Options&, std::ostream& out) {
  const MagneticModel base = parse_model(require(cfg, "model"));
  const std::vector<double> betas = parse_grid(require(cfg, "beta"), "beta");
  const std::vector<double> fields = parse_grid(require(cfg, "b"), "b");
  const double h = get_number(cfg, "fd_step", 1e-4);
  if (!(h > 0.0)) config_error("'fd_step' must be positive");
  for (double beta : betas) {
    if (!(beta - h > 0.0)) config_error("every beta must exceed fd_step");
  }

  CsvWriter csv(out);
  csv.header({"beta", "b", "C_V", "chi_M", "sum_p_chiF", "metric_dbeta", "metric_db",
              "fd_metric_dbeta", "fd_metric_db", "rel_err_dbeta", "rel_err_db"});
  for (double beta : betas) {
    for (double b : fields) {
      const MagneticModel model = base.at_field(b);
      const Susceptibilities s = susceptibilities(model, beta);
      const double sum_chi_f = weighted_fidelity_susceptibility(s);
      const double g_beta = metric_dbeta(model, beta);
      const double g_b = 0.25 * beta * s.chi_m + sum_chi_f;
      const double fd_beta = fd_breakdown_dbeta(model, beta, h).total;
      const double fd_b = fd_breakdown_db(model, beta, h).total;
      csv.row({beta, b, specific_heat(model, beta), s.chi_m, sum_chi_f, g_beta, g_b, fd_beta, fd_b,
               relative_error(g_beta, fd_beta), relative_error(g_b, fd_b)});
    }
  }
}

// ---------------------------------------------------------------------------

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"metric-path", "geodesic", "bures", "interfere",
                                              "thermal-scan"};
  return names;
}

/// Runs one command on an already parsed config. Returns the process exit code.
inline int run_command(const std::string& name, const json& cfg, const Options& opt,
                       std::ostream& out, std::ostream& err) {
  try {
    if (!(opt.tol > 0.0)) config_error("--tol must be positive");
    if (!cfg.is_object()) config_error("config must be a JSON object");
    if (name == "metric-path") {
      cmd_metric_path(cfg, opt, out);
    } else if (name == "geodesic") {
      cmd_geodesic(cfg, opt, out);
    } else if (name == "bures") {
      cmd_bures(cfg, opt, out);
    } else if (name == "interfere") {
      cmd_interfere(cfg, opt, out);
    } else if (name == "thermal-scan") {
      cmd_thermal_scan(cfg, opt, out);
    } else {
      config_error("unknown command '" + name + "'");
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical(e.kind()) ? 3 : 2;
  } catch (const json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

inline int run_command_text(const std::string& name, const std::string& config_text,
                            const Options& opt, std::ostream& out, std::ostream& err) {
  json cfg;
  try {
    cfg = json::parse(config_text);
  } catch (const json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return 2;
  }
  return run_command(name, cfg, opt, out, err);
}

}  // namespace mixgeo::cli
