#pragma once

// Thermal states of H(b) = H0 + b Sz and the coefficients of the line element
// along temperature and field directions.

#include <cmath>
#include <string>
#include <vector>

#include "mixgeo/error.hpp"
#include "mixgeo/hermitian.hpp"
#include "mixgeo/spectral_metric.hpp"
#include "mixgeo/state_space.hpp"

namespace mixgeo {

struct MagneticModel {
  ComplexMatrix h0;
  ComplexMatrix sz;
  double b = 0.0;
  int n_sites = 1;

  ComplexMatrix hamiltonian() const { return h0 + b * sz; }

  MagneticModel at_field(double field) const {
    MagneticModel m = *this;
    m.b = field;
    return m;
  }
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// op acting on `site` of an n-site spin-1/2 chain.
inline ComplexMatrix site_operator(const ComplexMatrix& op, int site, int n) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int s = 0; s < n; ++s) out = kron(out, s == site ? op : ComplexMatrix::Identity(2, 2));
  return out;
}

struct ChainParams {
  double coupling = 1.0;     // J
  double anisotropy = 1.0;   // Delta on the zz bond term
  double transverse = 0.0;   // g, couples to sum_i sigma_x^(i)
  double field = 0.0;        // b
};

/// Open XXZ chain H0 = J/4 sum_i (sx sx + sy sy + Delta sz sz) + g sum_i sx,
/// Sz = sum_i sz / 2.
inline MagneticModel build_spin_chain(int n, const ChainParams& p) {
  if (n > 6) fail(ErrorKind::DimensionTooLarge, "chains are limited to 6 sites (dim 64)");
  if (n < 2) fail(ErrorKind::InvalidArgument, "a chain needs at least 2 sites");
  const auto dim = Eigen::Index{1} << n;
  MagneticModel m;
  m.h0 = ComplexMatrix::Zero(dim, dim);
  m.sz = ComplexMatrix::Zero(dim, dim);
  m.b = p.field;
  m.n_sites = n;
  std::vector<ComplexMatrix> sx, sy, sz;
  for (int i = 0; i < n; ++i) {
    sx.push_back(site_operator(pauli_x(), i, n));
    sy.push_back(site_operator(pauli_y(), i, n));
    sz.push_back(site_operator(pauli_z(), i, n));
  }
  for (int i = 0; i + 1 < n; ++i) {
    m.h0 += 0.25 * p.coupling *
            (sx[i] * sx[i + 1] + sy[i] * sy[i + 1] + p.anisotropy * sz[i] * sz[i + 1]);
  }
  for (int i = 0; i < n; ++i) {
    m.h0 += p.transverse * sx[i];
    m.sz += 0.5 * sz[i];
  }
  return m;
}

/// Isotropic Heisenberg chain; commutes with Sz.
inline MagneticModel build_heisenberg_chain(int n, double j) {
  return build_spin_chain(n, ChainParams{j, 1.0, 0.0, 0.0});
}

/// One spin-1/2 in a field: H = b sigma_z / 2.
inline MagneticModel single_spin(double b) {
  return {ComplexMatrix::Zero(2, 2), 0.5 * pauli_z(), b, 1};
}

struct ThermalState {
  double beta = 1.0;
  HermitianEigen eigen;  // energies ascending
  double log_z = 0.0;
  double z = 1.0;
  std::vector<double> weights;

  DensityOperator density() const {
    ComplexMatrix rho = ComplexMatrix::Zero(eigen.dim(), eigen.dim());
    for (Eigen::Index m = 0; m < eigen.dim(); ++m)
      rho += weights[static_cast<std::size_t>(m)] * eigen.vectors.col(m) * eigen.vectors.col(m).adjoint();
    return DensityOperator(rho);
  }

  /// Thermal average of f(epsilon_m).
  template <class F>
  double average(F&& f) const {
    double s = 0.0;
    for (Eigen::Index m = 0; m < eigen.dim(); ++m) s += weights[static_cast<std::size_t>(m)] * f(m);
    return s;
  }
};

inline ThermalState thermal_state(const MagneticModel& model, double beta) {
  if (!(beta > 0.0)) fail(ErrorKind::InvalidArgument, "beta must be positive");
  ThermalState s;
  s.beta = beta;
  s.eigen = eig_hermitian(model.hamiltonian());
  const double e0 = s.eigen.values.minCoeff();
  double sum = 0.0;
  s.weights.resize(static_cast<std::size_t>(s.eigen.dim()));
  for (Eigen::Index m = 0; m < s.eigen.dim(); ++m) {
    const double w = std::exp(-beta * (s.eigen.values[m] - e0));
    s.weights[static_cast<std::size_t>(m)] = w;
    sum += w;
  }
  for (double& w : s.weights) w /= sum;
  s.log_z = std::log(sum) - beta * e0;
  s.z = std::exp(s.log_z);
  return s;
}

namespace detail {

inline double energy_variance(const ThermalState& s) {
  const auto& e = s.eigen.values;
  const double mean = s.average([&](Eigen::Index m) { return e[m]; });
  return s.average([&](Eigen::Index m) { return (e[m] - mean) * (e[m] - mean); });
}

}  // namespace detail

/// C_V = beta^2 (<eps^2> - <eps>^2)
inline double specific_heat(const MagneticModel& model, double beta) {
  return beta * beta * detail::energy_variance(thermal_state(model, beta));
}

/// Coefficient of dbeta^2: C_V / (4 beta^2).
inline double metric_dbeta(const MagneticModel& model, double beta) {
  return 0.25 * detail::energy_variance(thermal_state(model, beta));
}

struct Susceptibilities {
  double chi_m = 0.0;
  std::vector<double> chi_f;  // per energy eigenstate, ascending energy
  std::vector<double> weights;
};

/// chi_M = beta Var(d eps / db) with d eps_m / db = <m|Sz|m>, and
/// chi_F,m = sum_{m' != m} |<m'|Sz|m>|^2 / (eps_m - eps_m')^2.
inline Susceptibilities susceptibilities(const MagneticModel& model, double beta,
                                         double degeneracy_tol = kDefaultDegeneracyTol) {
  const ThermalState s = thermal_state(model, beta);
  const auto& e = s.eigen.values;
  const auto dim = s.eigen.dim();
  for (Eigen::Index m = 1; m < dim; ++m) {
    if (e[m] - e[m - 1] <= degeneracy_tol) {
      fail(ErrorKind::DegenerateSpectrum,
           "energies " + std::to_string(e[m - 1]) + " and " + std::to_string(e[m]) + " coincide");
    }
  }
  const ComplexMatrix sz = s.eigen.vectors.adjoint() * model.sz * s.eigen.vectors;

  Susceptibilities out;
  out.weights = s.weights;
  const double mean = s.average([&](Eigen::Index m) { return sz(m, m).real(); });
  out.chi_m = beta * s.average([&](Eigen::Index m) {
    const double d = sz(m, m).real() - mean;
    return d * d;
  });
  out.chi_f.assign(static_cast<std::size_t>(dim), 0.0);
  for (Eigen::Index m = 0; m < dim; ++m) {
    double chi = 0.0;
    for (Eigen::Index mp = 0; mp < dim; ++mp) {
      if (mp == m) continue;
      const double gap = e[m] - e[mp];
      chi += std::norm(sz(mp, m)) / (gap * gap);
    }
    out.chi_f[static_cast<std::size_t>(m)] = chi;
  }
  return out;
}

inline double weighted_fidelity_susceptibility(const Susceptibilities& s) {
  double total = 0.0;
  for (std::size_t m = 0; m < s.chi_f.size(); ++m) total += s.weights[m] * s.chi_f[m];
  return total;
}

/// Coefficient of db^2: beta chi_M / 4 + sum_m p_m chi_F,m.
inline double metric_db(const MagneticModel& model, double beta) {
  const Susceptibilities s = susceptibilities(model, beta);
  return 0.25 * beta * s.chi_m + weighted_fidelity_susceptibility(s);
}

// Finite-difference route: the full spectral line element of the three-point
// path of thermal states around (beta, b), divided by the squared step.

inline LineElementBreakdown fd_breakdown_dbeta(const MagneticModel& model, double beta, double h) {
  const std::vector<double> grid{beta - h, beta, beta + h};
  const AlignedPath path =
      sample_path([&](double x) { return thermal_state(model, x).density(); }, grid);
  LineElementBreakdown le = differential_line_element(path, 1);
  const double s = 1.0 / (h * h);
  le.total *= s;
  le.fisher_rao *= s;
  for (double& t : le.fubini_study_terms) t *= s;
  return le;
}

inline LineElementBreakdown fd_breakdown_db(const MagneticModel& model, double beta, double h) {
  const std::vector<double> grid{model.b - h, model.b, model.b + h};
  const AlignedPath path = sample_path(
      [&](double x) { return thermal_state(model.at_field(x), beta).density(); }, grid);
  LineElementBreakdown le = differential_line_element(path, 1);
  const double s = 1.0 / (h * h);
  le.total *= s;
  le.fisher_rao *= s;
  for (double& t : le.fubini_study_terms) t *= s;
  return le;
}

}  // namespace mixgeo
