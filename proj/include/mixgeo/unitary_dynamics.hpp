#pragma once

#include <cmath>
#include <vector>

#include "mixgeo/hermitian.hpp"
#include "mixgeo/spectral_metric.hpp"
#include "mixgeo/state_space.hpp"

namespace mixgeo {

/// Averaged energy dispersion sum_k p_k (Delta_k E)^2 next to the ordinary
/// dispersion Tr(rho H^2) - Tr(rho H)^2 (hbar = 1).
struct DispersionReport {
  double avg_dispersion_sq = 0.0;
  double rho_dispersion_sq = 0.0;
  std::vector<double> per_branch;
};

inline DensityOperator evolve(const DensityOperator& rho0, const ComplexMatrix& h, double t) {
  if (h.rows() != rho0.dim()) fail(ErrorKind::InvalidArgument, "Hamiltonian dimension mismatch");
  const ComplexMatrix u = unitary_exp(h, t);
  const ComplexMatrix rho = u * rho0.matrix() * u.adjoint();
  return DensityOperator(0.5 * (rho + rho.adjoint()));
}

/// Dispersions for the branches of an already computed decomposition. The
/// energy zero is shifted to Tr(rho H) first, so adding c * 1 to H changes
/// nothing beyond rounding.
inline DispersionReport dispersions(const SpectralDecomposition& d, const ComplexMatrix& h) {
  if (h.rows() != d.dim() || !is_hermitian(h)) {
    fail(ErrorKind::NotHermitian, "Hamiltonian must be Hermitian with matching dimension");
  }
  const ComplexMatrix rho = d.reconstruct();
  const double mean = (rho * h).trace().real() / d.mass();
  ComplexMatrix shifted = h;
  shifted.diagonal().array() -= mean;
  const ComplexMatrix shifted_sq = shifted * shifted;

  DispersionReport r;
  r.per_branch.resize(d.rank());
  for (std::size_t k = 0; k < d.rank(); ++k) {
    const ComplexVector n = d.vector(k);
    const double e1 = n.dot(shifted * n).real();
    const double e2 = n.dot(shifted_sq * n).real();
    r.per_branch[k] = std::max(e2 - e1 * e1, 0.0);
    r.avg_dispersion_sq += d.probs[k] * r.per_branch[k];
  }
  r.rho_dispersion_sq = std::max((rho * shifted_sq).trace().real(), 0.0);
  return r;
}

inline DispersionReport dispersions(const DensityOperator& rho, const ComplexMatrix& h) {
  return dispersions(decompose(rho), h);
}

struct SpeedPair {
  double metric_speed = 0.0;
  double dispersion_speed = 0.0;
};

/// ds/dt from the differential line element next to sqrt of the averaged
/// energy dispersion at interior sample i.
inline SpeedPair speed(const AlignedPath& path, std::size_t i, const ComplexMatrix& h) {
  const LineElementBreakdown le = differential_line_element(path, i);
  const double dt = path.times[i + 1] - path.times[i];
  return {std::sqrt(le.total) / dt, std::sqrt(dispersions(path.decomps[i], h).avg_dispersion_sq)};
}

struct UncertaintyReport {
  double lhs_rho = 0.0;   // <Delta_rho E> Delta t
  double lhs_avg = 0.0;   // <mean Delta E> Delta t
  double path_len = 0.0;  // chord-summed length of the same path
};

/// Left-endpoint Riemann sums of both dispersions over the path grid.
inline UncertaintyReport uncertainty_check(const AlignedPath& path, const ComplexMatrix& h) {
  UncertaintyReport r;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double dt = path.times[i + 1] - path.times[i];
    const DispersionReport d = dispersions(path.decomps[i], h);
    r.lhs_rho += std::sqrt(d.rho_dispersion_sq) * dt;
    r.lhs_avg += std::sqrt(d.avg_dispersion_sq) * dt;
  }
  r.path_len = path_length(path);
  return r;
}

/// Aligned path of rho0 evolved under H on the given time grid.
inline AlignedPath unitary_path(const DensityOperator& rho0, const ComplexMatrix& h,
                                std::span<const double> grid) {
  return sample_path([&](double t) { return evolve(rho0, h, t); }, grid);
}

}  // namespace mixgeo
