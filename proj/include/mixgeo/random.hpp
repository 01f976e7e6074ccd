#pragma once

// Random instances for fuzzing: Hermitian matrices, Haar unitaries and density
// operators with a controlled spectrum. Deterministic for a given engine seed.

#include <algorithm>
#include <random>
#include <vector>

#include "mixgeo/hermitian.hpp"
#include "mixgeo/state_space.hpp"

namespace mixgeo {

using Rng = std::mt19937_64;

inline ComplexMatrix random_ginibre(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

inline ComplexMatrix random_hermitian(Rng& rng, Eigen::Index n, double scale = 1.0) {
  const ComplexMatrix g = random_ginibre(rng, n);
  return 0.5 * scale * (g + g.adjoint());
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the R-diagonal
/// phases divided out.
inline ComplexMatrix random_unitary(Rng& rng, Eigen::Index n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_ginibre(rng, n));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

/// Density operator of dimension n and given rank whose nonzero eigenvalues
/// are pairwise separated by at least min_gap and no smaller than min_prob.
inline DensityOperator random_density(Rng& rng, Eigen::Index n, Eigen::Index rank = -1,
                                      double min_gap = 0.02, double min_prob = 0.02) {
  if (rank < 0) rank = n;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> p(static_cast<std::size_t>(rank));
  for (;;) {
    double sum = 0.0;
    for (double& x : p) {
      x = uni(rng);
      sum += x;
    }
    for (double& x : p) x /= sum;
    std::vector<double> s = p;
    std::sort(s.begin(), s.end());
    bool ok = s.front() >= min_prob;
    for (std::size_t k = 1; k < s.size(); ++k) ok = ok && (s[k] - s[k - 1] >= min_gap);
    if (ok) break;
  }
  const ComplexMatrix u = random_unitary(rng, n);
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < rank; ++k)
    rho += p[static_cast<std::size_t>(k)] * u.col(k) * u.col(k).adjoint();
  return DensityOperator(rho);
}

}  // namespace mixgeo
