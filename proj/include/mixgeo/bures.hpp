#pragma once

// Distance over arbitrary decompositions rho = sum_k |w_k><w_k| with
// w_k = sum_l sqrt(p_l) |n_l> V_lk. Minimizing over V gives the Bures line
// element, reached both through the overlap matrix and the Uhlmann fidelity.

#include <algorithm>
#include <cmath>

#include "mixgeo/hermitian.hpp"
#include "mixgeo/spectral_metric.hpp"
#include "mixgeo/state_space.hpp"

namespace mixgeo {

/// M_kl = sqrt(p_k q_l) <n_k|m_l>
inline ComplexMatrix overlap_matrix(const SpectralDecomposition& a, const SpectralDecomposition& b) {
  detail::require_same_rank(a, b);
  const auto n = static_cast<Eigen::Index>(a.rank());
  ComplexMatrix m = a.vectors.adjoint() * b.vectors;
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = 0; l < n; ++l) m(k, l) *= std::sqrt(a.probs[k] * b.probs[l]);
  return m;
}

/// (sum p + sum q) - 2 Tr|M|; equals 2 - 2 Tr|M| for full-mass decompositions.
inline double bures_line_element_sq(const SpectralDecomposition& a, const SpectralDecomposition& b) {
  const PolarDecomposition polar = polar_unitary(overlap_matrix(a, b));
  return std::max(a.mass() + b.mass() - 2.0 * trace_real(polar.abs), 0.0);
}

/// F = Tr sqrt(sqrt(rho) sigma sqrt(rho)), clamped to [0, 1].
inline double uhlmann_fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) fail(ErrorKind::InvalidArgument, "dimension mismatch");
  const ComplexMatrix sr = matrix_sqrt_psd(rho.matrix());
  ComplexMatrix inner = sr * sigma.matrix() * sr;
  inner = 0.5 * (inner + inner.adjoint());
  const double f = trace_real(matrix_sqrt_psd(inner, 1e-10));
  return std::clamp(f, 0.0, 1.0);
}

/// sum_k || w_k(a, V_a) - w_k(b, V_b) ||^2 evaluated vector by vector.
inline double decomposition_distance_general(const SpectralDecomposition& a,
                                             const SpectralDecomposition& b,
                                             const ComplexMatrix& va, const ComplexMatrix& vb) {
  detail::require_same_rank(a, b);
  const auto n = static_cast<Eigen::Index>(a.rank());
  if (va.rows() != n || vb.rows() != n || !is_unitary(va) || !is_unitary(vb)) {
    fail(ErrorKind::NotUnitary, "decomposition rotations must be unitary rank x rank matrices");
  }
  ComplexMatrix sa = a.vectors;
  ComplexMatrix sb = b.vectors;
  for (Eigen::Index k = 0; k < n; ++k) {
    sa.col(k) *= std::sqrt(a.probs[static_cast<std::size_t>(k)]);
    sb.col(k) *= std::sqrt(b.probs[static_cast<std::size_t>(k)]);
  }
  const ComplexMatrix wa = sa * va;
  const ComplexMatrix wb = sb * vb;
  double d2 = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) d2 += (wa.col(k) - wb.col(k)).squaredNorm();
  return d2;
}

/// Rotation V_b = U^dagger V_a attaining the minimum, where M = |M| U.
inline ComplexMatrix optimal_rotation(const SpectralDecomposition& a, const SpectralDecomposition& b,
                                      const ComplexMatrix& va) {
  return polar_unitary(overlap_matrix(a, b)).unitary.adjoint() * va;
}

}  // namespace mixgeo
