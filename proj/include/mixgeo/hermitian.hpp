#pragma once

// Dense complex linear algebra shared by every other header: Hermitian
// eigendecomposition with a reproducible gauge, PSD square roots, the polar
// decomposition and the unitary propagator exp(-iHt) (hbar = 1).

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>

#include "mixgeo/error.hpp"

namespace mixgeo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-9;

namespace detail {

inline double scale_of(const ComplexMatrix& a) { return std::max(1.0, a.cwiseAbs().maxCoeff()); }

inline void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() < 1 || a.rows() != a.cols()) {
    fail(ErrorKind::InvalidArgument, std::string(what) + " must be a non-empty square matrix");
  }
}

}  // namespace detail

inline double hermiticity_defect(const ComplexMatrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = kDefaultTol) {
  return a.rows() == a.cols() && a.rows() > 0 && hermiticity_defect(a) <= tol * detail::scale_of(a);
}

inline bool is_unitary(const ComplexMatrix& a, double tol = kDefaultTol) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  const auto n = a.rows();
  return (a * a.adjoint() - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <= tol;
}

/// Eigenpairs of a Hermitian matrix. `values` ascend; column k of `vectors`
/// belongs to values[k].
struct HermitianEigen {
  RealVector values;
  ComplexMatrix vectors;

  Eigen::Index dim() const { return values.size(); }

  ComplexMatrix reconstruct() const {
    return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
  }
};

/// Multiply v by a unit phase so that its largest-magnitude component is real
/// and positive. Among near-equal magnitudes the lowest index wins.
inline void fix_phase(Eigen::Ref<ComplexVector> v) {
  const double vmax = v.cwiseAbs().maxCoeff();
  if (vmax == 0.0) return;
  Eigen::Index pick = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= vmax * (1.0 - 1e-10)) {
      pick = i;
      break;
    }
  }
  v *= std::conj(v[pick]) / std::abs(v[pick]);
}

inline HermitianEigen eig_hermitian(const ComplexMatrix& a, double tol = kDefaultTol) {
  detail::require_square(a, "eig_hermitian input");
  if (!is_hermitian(a, tol)) {
    fail(ErrorKind::NotHermitian,
         "Hermiticity defect " + std::to_string(hermiticity_defect(a)) + " exceeds tolerance");
  }
  const ComplexMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::ConvergenceFailure, "Hermitian eigensolver did not converge");
  }
  HermitianEigen out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) fix_phase(out.vectors.col(k));
  return out;
}

inline bool is_psd(const ComplexMatrix& a, double tol = kDefaultTol) {
  if (!is_hermitian(a, tol)) return false;
  return eig_hermitian(a, tol).values.minCoeff() >= -tol;
}

/// Hermitian PSD square root. Eigenvalues in [-tol, 0) are clamped to zero.
inline ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& a, double tol = kDefaultTol) {
  const HermitianEigen e = eig_hermitian(a, tol);
  RealVector roots(e.dim());
  for (Eigen::Index k = 0; k < e.dim(); ++k) {
    const double lambda = e.values[k];
    if (lambda < -tol) {
      fail(ErrorKind::NotPSD, "eigenvalue " + std::to_string(lambda) + " below -tol");
    }
    roots[k] = std::sqrt(std::max(lambda, 0.0));
  }
  return e.vectors * roots.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

/// M = absM * unitary with absM = sqrt(M M^dagger).
struct PolarDecomposition {
  ComplexMatrix abs;
  ComplexMatrix unitary;
};

inline PolarDecomposition polar_unitary(const ComplexMatrix& m) {
  detail::require_square(m, "polar_unitary input");
  // M M^dagger is PSD up to rounding; the loose tolerance only absorbs that.
  const ComplexMatrix mmd = m * m.adjoint();
  const double tol = 1e-10 * detail::scale_of(mmd);
  ComplexMatrix abs_m = matrix_sqrt_psd(0.5 * (mmd + mmd.adjoint()), tol);

  // Unitary factor from the SVD M = W S Y^dagger, U = W Y^dagger. This is a
  // valid completion even when M is singular.
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) fail(ErrorKind::ConvergenceFailure, "SVD did not converge");
  ComplexMatrix u = svd.matrixU() * svd.matrixV().adjoint();
  return {std::move(abs_m), std::move(u)};
}

/// exp(-i H t), built from the eigendecomposition of H.
inline ComplexMatrix unitary_exp(const ComplexMatrix& h, double t, double tol = kDefaultTol) {
  const HermitianEigen e = eig_hermitian(h, tol);
  ComplexVector phases(e.dim());
  for (Eigen::Index k = 0; k < e.dim(); ++k) phases[k] = std::polar(1.0, -e.values[k] * t);
  return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

inline double trace_real(const ComplexMatrix& a) { return a.trace().real(); }

// Pauli matrices, handy for qubit work throughout the library and its tests.
inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace mixgeo
