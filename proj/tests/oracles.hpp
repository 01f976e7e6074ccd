#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance runner. None of them call the routine they are used to check.

#include <cmath>
#include <numbers>
#include <vector>

#include "mixgeo/mixgeo.hpp"

namespace mixgeo::oracles {

/// Minimum of decomposition_distance_sq over a uniform grid of the phases of
/// b (points per circle). Rank <= 2 walks the full product grid; higher ranks
/// use that the distance is a sum of single-branch terms, so the product-grid
/// minimum is the sum of per-branch grid minima.
inline double phase_grid_min(const SpectralDecomposition& a, SpectralDecomposition b,
                             int points = 360) {
  const double step = 2.0 * std::numbers::pi / points;
  if (b.rank() == 1) {
    double best = 1e300;
    for (int i = 0; i < points; ++i) {
      b.phases[0] = i * step;
      best = std::min(best, decomposition_distance_sq(a, b));
    }
    return best;
  }
  if (b.rank() == 2) {
    double best = 1e300;
    for (int i = 0; i < points; ++i) {
      b.phases[0] = i * step;
      for (int j = 0; j < points; ++j) {
        b.phases[1] = j * step;
        best = std::min(best, decomposition_distance_sq(a, b));
      }
    }
    return best;
  }
  double total = 0.0;
  for (std::size_t k = 0; k < b.rank(); ++k) {
    const auto ak = SpectralDecomposition::from({a.probs[k]}, a.vectors.col(static_cast<Eigen::Index>(k)),
                                                {a.phases[k]});
    auto bk = SpectralDecomposition::from({b.probs[k]}, b.vectors.col(static_cast<Eigen::Index>(k)),
                                          {0.0});
    total += phase_grid_min(ak, bk, points);
  }
  return total;
}

/// rho(t) = U(theta(t)) rho0 U(theta(t))^dagger with theta = omega t + kappa t^2.
struct AcceleratedRotation {
  ComplexMatrix rho0;
  ComplexMatrix h;
  double omega = 1.0;
  double kappa = 0.5;

  DensityOperator operator()(double t) const {
    const ComplexMatrix u = unitary_exp(h, omega * t + kappa * t * t);
    const ComplexMatrix r = u * rho0 * u.adjoint();
    return DensityOperator(0.5 * (r + r.adjoint()));
  }
};

/// Fixed eigenbasis, probabilities moving as p_k(t) = (base_k + amp_k sin(t)) / Z.
struct ClassicalDrift {
  ComplexMatrix basis;
  std::vector<double> base;
  std::vector<double> amp;

  DensityOperator operator()(double t) const {
    std::vector<double> p(base.size());
    double z = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      p[k] = base[k] + amp[k] * std::sin(t);
      z += p[k];
    }
    ComplexMatrix r = ComplexMatrix::Zero(basis.rows(), basis.rows());
    for (std::size_t k = 0; k < p.size(); ++k) {
      const auto c = basis.col(static_cast<Eigen::Index>(k));
      r += (p[k] / z) * c * c.adjoint();
    }
    return DensityOperator(r);
  }
};

/// |line_element_sq(t0, t0 + dt) - differential_line_element at t0|.
template <class Family>
double split_residual(const Family& family, double t0, double dt) {
  const std::vector<double> grid{t0 - dt, t0, t0 + dt};
  const AlignedPath path = sample_path(family, grid);
  const double discrete = line_element_sq(path.decomps[1], path.decomps[2]);
  return std::abs(discrete - differential_line_element(path, 1).total);
}

/// Sum_k sqrt(p_k (p_k + dp_k)) |<n_k|U|n_k>| expanded to second order in dp
/// and written as 1 - P0 at the optimal phases.
inline double purified_loss_series(const SpectralDecomposition& d, const ComplexMatrix& u,
                                   const std::vector<double>& dp) {
  double overlap = 0.0;
  for (std::size_t k = 0; k < d.rank(); ++k) {
    const double p = d.probs[k];
    const double root = p + 0.5 * dp[k] - dp[k] * dp[k] / (8.0 * p);
    overlap += root * std::abs(d.vector(k).dot(u * d.vector(k)));
  }
  return 0.5 - 0.5 * overlap;
}

/// Exact 1 - P0 at the optimal phases: 1/2 - 1/2 sum_k sqrt(p_k (p_k + dp_k)) |<n_k|U|n_k>|.
inline double purified_loss_exact(const SpectralDecomposition& d, const ComplexMatrix& u,
                                  const std::vector<double>& dp) {
  double overlap = 0.0;
  for (std::size_t k = 0; k < d.rank(); ++k) {
    overlap += std::sqrt(d.probs[k] * (d.probs[k] + dp[k])) *
               std::abs(d.vector(k).dot(u * d.vector(k)));
  }
  return 0.5 - 0.5 * overlap;
}

/// exp(-beta H) / Z from a scaled-and-squared Taylor series; no eigensolver.
inline ComplexMatrix thermal_density_taylor(const ComplexMatrix& h, double beta) {
  const double norm = h.cwiseAbs().rowwise().sum().maxCoeff() * beta;
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const ComplexMatrix a = (-beta / std::ldexp(1.0, squarings)) * h;
  const auto n = h.rows();
  ComplexMatrix term = ComplexMatrix::Identity(n, n);
  ComplexMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum / sum.trace().real();
}

}  // namespace mixgeo::oracles
