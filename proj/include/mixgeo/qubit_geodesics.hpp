#pragma once

// Nondegenerate single-qubit geometry in the Bloch ball. With u = arcsin r the
// in-plane line element becomes 1/4 (du^2 + dtheta^2), so geodesics are
// straight lines in (u, theta) and lengths are half Euclidean distances.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mixgeo/error.hpp"
#include "mixgeo/hermitian.hpp"
#include "mixgeo/state_space.hpp"

namespace mixgeo {

struct BlochPoint {
  double r = 1.0;
  double theta = 0.0;
  double phi = 0.0;

  void validate() const {
    if (!(r > 0.0 && r <= 1.0)) fail(ErrorKind::DomainError, "Bloch radius must lie in (0, 1]");
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
      fail(ErrorKind::DomainError, "polar angle must lie in [0, pi]");
    }
  }
};

struct BlochDisplacement {
  double dr = 0.0;
  double dtheta = 0.0;
  double dphi = 0.0;
};

/// Endpoints (r1, 0) and (r2, theta12) in the xz-plane.
struct GeodesicSpec {
  double r1 = 1.0;
  double r2 = 1.0;
  double theta12 = std::numbers::pi;

  void validate() const {
    if (!(r1 > 0.0 && r1 <= 1.0) || !(r2 > 0.0 && r2 <= 1.0)) {
      fail(ErrorKind::DomainError, "geodesic radii must lie in (0, 1]");
    }
    if (!(theta12 > 0.0 && theta12 <= std::numbers::pi)) {
      fail(ErrorKind::DomainError, "theta12 must lie in (0, pi]");
    }
  }
};

/// ds^2 = 1/4 (dr^2 / (1 - r^2) + dtheta^2 + sin^2(theta) dphi^2)
inline double qubit_line_element_sq(const BlochPoint& p, const BlochDisplacement& d) {
  p.validate();
  double radial = 0.0;
  if (p.r == 1.0) {
    if (d.dr != 0.0) fail(ErrorKind::DomainError, "radial motion at the pure-state boundary");
  } else {
    radial = d.dr * d.dr / (1.0 - p.r * p.r);
  }
  const double s = std::sin(p.theta);
  return 0.25 * (radial + d.dtheta * d.dtheta + s * s * d.dphi * d.dphi);
}

/// rho = (1 + r n.sigma) / 2
inline DensityOperator bloch_density(const BlochPoint& p) {
  const double st = std::sin(p.theta);
  const ComplexMatrix m =
      0.5 * (ComplexMatrix::Identity(2, 2) +
             p.r * (st * std::cos(p.phi) * pauli_x() + st * std::sin(p.phi) * pauli_y() +
                    std::cos(p.theta) * pauli_z()));
  return DensityOperator(m);
}

inline std::array<double, 3> bloch_vector(const DensityOperator& rho) {
  if (rho.dim() != 2) fail(ErrorKind::InvalidArgument, "Bloch vector needs a qubit state");
  const auto& m = rho.matrix();
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

inline double geodesic_r(const GeodesicSpec& spec, double theta) {
  spec.validate();
  if (!(theta >= 0.0 && theta <= spec.theta12)) {
    fail(ErrorKind::DomainError, "theta outside [0, theta12]");
  }
  if (theta == 0.0) return spec.r1;
  if (theta == spec.theta12) return spec.r2;
  const double u1 = std::asin(spec.r1);
  const double u2 = std::asin(spec.r2);
  return std::sin(u1 + (u2 - u1) * theta / spec.theta12);
}

inline double geodesic_length(const GeodesicSpec& spec) {
  spec.validate();
  const double du = std::asin(spec.r2) - std::asin(spec.r1);
  return 0.5 * std::sqrt(spec.theta12 * spec.theta12 + du * du);
}

/// Geodesic distance between two nondegenerate qubit states.
inline double qubit_distance(const DensityOperator& a, const DensityOperator& b) {
  const auto va = bloch_vector(a);
  const auto vb = bloch_vector(b);
  const double ra = std::hypot(va[0], va[1], va[2]);
  const double rb = std::hypot(vb[0], vb[1], vb[2]);
  if (!(ra > 0.0) || !(rb > 0.0)) fail(ErrorKind::DomainError, "maximally mixed state");
  const double dot = va[0] * vb[0] + va[1] * vb[1] + va[2] * vb[2];
  const double cross = std::hypot(va[1] * vb[2] - va[2] * vb[1], va[2] * vb[0] - va[0] * vb[2],
                                  va[0] * vb[1] - va[1] * vb[0]);
  const double angle = std::atan2(cross, dot);
  const double du = std::asin(std::min(rb, 1.0)) - std::asin(std::min(ra, 1.0));
  return 0.5 * std::sqrt(angle * angle + du * du);
}

struct NumericGeodesic {
  std::vector<double> theta;
  std::vector<double> r;
  double length = 0.0;
};

/// Minimizes the discretized length 1/2 sum_j sqrt(h^2 + (u_{j+1} - u_j)^2)
/// over the interior u_j by damped Newton iteration (the Hessian is
/// tridiagonal). Starts from the straight line in r, not in u.
inline NumericGeodesic numeric_geodesic(const GeodesicSpec& spec, std::size_t n_points) {
  spec.validate();
  if (n_points < 3) fail(ErrorKind::InvalidArgument, "numeric geodesic needs at least 3 points");
  const std::size_t n = n_points;
  const double h = spec.theta12 / static_cast<double>(n - 1);

  std::vector<double> u(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = static_cast<double>(j) / static_cast<double>(n - 1);
    u[j] = std::asin(spec.r1 + (spec.r2 - spec.r1) * s);
  }
  u.front() = std::asin(spec.r1);
  u.back() = std::asin(spec.r2);

  auto length = [&](const std::vector<double>& x) {
    double l = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) l += std::hypot(h, x[j + 1] - x[j]);
    return 0.5 * l;
  };

  const std::size_t m = n - 2;  // interior unknowns
  std::vector<double> grad(m), diag(m), off(m), step(m), cprime(m), trial(n);
  bool converged = false;
  for (int iter = 0; iter < 200 && !converged; ++iter) {
    for (std::size_t j = 0; j < m; ++j) {
      const double dl = u[j + 1] - u[j];
      const double dr = u[j + 2] - u[j + 1];
      const double sl = std::hypot(h, dl);
      const double sr = std::hypot(h, dr);
      const double cl = h * h / (sl * sl * sl);
      const double cr = h * h / (sr * sr * sr);
      grad[j] = 0.5 * (dl / sl - dr / sr);
      diag[j] = 0.5 * (cl + cr);
      off[j] = -0.5 * cr;  // coupling to unknown j + 1
    }
    double gmax = 0.0;
    for (double g : grad) gmax = std::max(gmax, std::abs(g));
    if (gmax < 1e-15) {
      converged = true;
      break;
    }
    // Thomas algorithm for H step = -grad.
    std::vector<double> rhs(m);
    for (std::size_t j = 0; j < m; ++j) rhs[j] = -grad[j];
    cprime[0] = off[0] / diag[0];
    rhs[0] /= diag[0];
    for (std::size_t j = 1; j < m; ++j) {
      const double denom = diag[j] - off[j - 1] * cprime[j - 1];
      cprime[j] = off[j] / denom;
      rhs[j] = (rhs[j] - off[j - 1] * rhs[j - 1]) / denom;
    }
    step[m - 1] = rhs[m - 1];
    for (std::size_t j = m - 1; j-- > 0;) step[j] = rhs[j] - cprime[j] * step[j + 1];

    const double l0 = length(u);
    double alpha = 1.0;
    for (;;) {
      trial = u;
      for (std::size_t j = 0; j < m; ++j) trial[j + 1] += alpha * step[j];
      if (length(trial) <= l0 || alpha < 1e-8) break;
      alpha *= 0.5;
    }
    double smax = 0.0;
    for (double s : step) smax = std::max(smax, std::abs(alpha * s));
    u = trial;
    if (smax < 1e-14) converged = true;
  }
  if (!converged) fail(ErrorKind::ConvergenceFailure, "numeric geodesic did not converge");

  NumericGeodesic g;
  g.theta.resize(n);
  g.r.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    g.theta[j] = h * static_cast<double>(j);
    g.r[j] = std::sin(u[j]);
  }
  g.theta.back() = spec.theta12;
  g.r.front() = spec.r1;
  g.r.back() = spec.r2;
  g.length = length(u);
  return g;
}

struct GeodesicSample {
  double r1, theta12, theta, x, z;
};

/// Geodesics from (r1, 0) to (0.05, theta12) for r1 in {0.1, 0.4, 0.7, 1} and
/// theta12 in {pi/4, pi}, 200 samples each; points r(theta)(sin theta, cos theta).
inline std::vector<GeodesicSample> figure2_dataset() {
  constexpr std::array<double, 4> radii{0.1, 0.4, 0.7, 1.0};
  constexpr std::array<double, 2> angles{std::numbers::pi / 4.0, std::numbers::pi};
  constexpr std::size_t samples = 200;
  std::vector<GeodesicSample> rows;
  rows.reserve(radii.size() * angles.size() * samples);
  for (double theta12 : angles) {
    for (double r1 : radii) {
      const GeodesicSpec spec{r1, 0.05, theta12};
      for (std::size_t j = 0; j < samples; ++j) {
        const double theta = j + 1 == samples
                                 ? theta12
                                 : theta12 * static_cast<double>(j) / static_cast<double>(samples - 1);
        const double r = geodesic_r(spec, theta);
        rows.push_back({r1, theta12, theta, r * std::sin(theta), r * std::cos(theta)});
      }
    }
  }
  return rows;
}

}  // namespace mixgeo
