#include <gtest/gtest.h>

#include <numbers>

#include "test_support.hpp"

namespace mixgeo {
namespace {

using testing::diag;
using testing::identity;
using testing::max_abs;
using testing::max_abs_diff;

TEST(EigHermitian, PauliZ) {
  const HermitianEigen e = eig_hermitian(pauli_z());
  EXPECT_DOUBLE_EQ(e.values[0], -1.0);
  EXPECT_DOUBLE_EQ(e.values[1], 1.0);
  ComplexMatrix expected(2, 2);
  expected << 0, 1, 1, 0;
  EXPECT_LT(max_abs_diff(e.vectors, expected), 1e-15);
}

TEST(EigHermitian, IdentityGivesOrthonormalBasis) {
  const HermitianEigen e = eig_hermitian(identity(3));
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(e.values[k], 1.0, 1e-15);
  EXPECT_LT(max_abs_diff(e.vectors.adjoint() * e.vectors, identity(3)), 1e-14);
}

TEST(EigHermitian, ReconstructsRandomMatricesUpToDim64) {
  Rng rng(7);
  for (Eigen::Index n : {1, 2, 3, 5, 8, 16, 33, 64}) {
    const ComplexMatrix a = random_hermitian(rng, n);
    const HermitianEigen e = eig_hermitian(a);
    EXPECT_LT(max_abs_diff(e.reconstruct(), a), 1e-10) << "dim " << n;
    EXPECT_LT(max_abs_diff(e.vectors.adjoint() * e.vectors, identity(n)), 1e-10) << "dim " << n;
    for (Eigen::Index k = 1; k < n; ++k) EXPECT_LE(e.values[k - 1], e.values[k]);
    for (Eigen::Index k = 0; k < n; ++k) {
      EXPECT_LT((a * e.vectors.col(k) - e.values[k] * e.vectors.col(k)).norm(), 1e-10);
    }
  }
}

TEST(EigHermitian, LargestComponentIsRealPositive) {
  Rng rng(11);
  const HermitianEigen e = eig_hermitian(random_hermitian(rng, 6));
  for (Eigen::Index k = 0; k < 6; ++k) {
    Eigen::Index imax = 0;
    e.vectors.col(k).cwiseAbs().maxCoeff(&imax);
    EXPECT_GT(e.vectors(imax, k).real(), 0.0);
    EXPECT_NEAR(e.vectors(imax, k).imag(), 0.0, 1e-15);
  }
}

TEST(EigHermitian, DeterministicOutput) {
  Rng rng(3);
  const ComplexMatrix a = random_hermitian(rng, 9);
  const HermitianEigen e1 = eig_hermitian(a);
  const HermitianEigen e2 = eig_hermitian(a);
  EXPECT_EQ(max_abs_diff(e1.vectors, e2.vectors), 0.0);
  EXPECT_EQ((e1.values - e2.values).cwiseAbs().maxCoeff(), 0.0);
}

TEST(EigHermitian, RejectsNonHermitian) {
  ComplexMatrix a(2, 2);
  a << 1, 2, 0, 1;
  try {
    eig_hermitian(a);
    FAIL() << "expected NotHermitian";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
  // Within tolerance is accepted.
  a(1, 0) = 2.0 + 1e-12;
  EXPECT_NO_THROW(eig_hermitian(a));
}

TEST(Predicates, HermitianUnitaryPsd) {
  EXPECT_TRUE(is_hermitian(pauli_y()));
  EXPECT_TRUE(is_unitary(pauli_y()));
  EXPECT_TRUE(is_psd(diag({0.3, 0.0})));
  EXPECT_FALSE(is_psd(diag({0.3, -0.1})));
  EXPECT_FALSE(is_unitary(diag({1.0, 2.0})));
  EXPECT_TRUE(is_psd(diag({1.0, -1e-12}), 1e-9));
}

TEST(MatrixSqrt, DiagonalAndZero) {
  EXPECT_LT(max_abs_diff(matrix_sqrt_psd(diag({4, 9})), diag({2, 3})), 1e-15);
  EXPECT_EQ(max_abs(matrix_sqrt_psd(ComplexMatrix::Zero(3, 3))), 0.0);
}

TEST(MatrixSqrt, MultiplyBackOnRandomPsd) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = random_density(rng, 4).matrix();
    const ComplexMatrix s = matrix_sqrt_psd(a);
    EXPECT_LT(max_abs_diff(s * s, a), 1e-10);
    EXPECT_TRUE(is_psd(s));
  }
}

TEST(MatrixSqrt, RejectsNegativeEigenvalue) {
  try {
    matrix_sqrt_psd(diag({1.0, -0.5}));
    FAIL() << "expected NotPSD";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPSD);
  }
  EXPECT_NO_THROW(matrix_sqrt_psd(diag({1.0, -1e-12})));
}

TEST(Polar, UnitaryInput) {
  Rng rng(9);
  const ComplexMatrix u = random_unitary(rng, 3);
  const PolarDecomposition p = polar_unitary(u);
  EXPECT_LT(max_abs_diff(p.abs, identity(3)), 1e-12);
  EXPECT_LT(max_abs_diff(p.unitary, u), 1e-12);
}

TEST(Polar, PositiveDiagonal) {
  const PolarDecomposition p = polar_unitary(diag({2, 3}));
  EXPECT_LT(max_abs_diff(p.abs, diag({2, 3})), 1e-14);
  EXPECT_LT(max_abs_diff(p.unitary, identity(2)), 1e-14);
}

TEST(Polar, TraceMatchesSingularValueOracle) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 1 + trial % 6;
    const ComplexMatrix m = random_ginibre(rng, n);
    const PolarDecomposition p = polar_unitary(m);
    // Oracle: singular values as square roots of the eigenvalues of M^dagger M.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.adjoint() * m);
    double sv_sum = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) sv_sum += std::sqrt(std::max(es.eigenvalues()[k], 0.0));
    EXPECT_NEAR(trace_real(p.abs), sv_sum, 1e-10);
    EXPECT_TRUE(is_unitary(p.unitary, 1e-12));
    EXPECT_LT(max_abs_diff(p.abs * p.unitary, m), 1e-10);
  }
}

TEST(Polar, SingularInputStillGivesUnitaryFactor) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 1) = Complex(0.0, 2.0);
  m(2, 2) = 1.0;
  const PolarDecomposition p = polar_unitary(m);
  EXPECT_NEAR(trace_real(p.abs), 3.0, 1e-12);
  EXPECT_TRUE(is_unitary(p.unitary, 1e-12));
  EXPECT_LT(max_abs_diff(p.abs * p.unitary, m), 1e-12);
}

TEST(UnitaryExp, ZeroTimeIsIdentity) {
  Rng rng(1);
  EXPECT_LT(max_abs_diff(unitary_exp(random_hermitian(rng, 4), 0.0), identity(4)), 1e-14);
}

TEST(UnitaryExp, DiagonalPauliZ) {
  const ComplexMatrix u = unitary_exp(pauli_z(), std::numbers::pi / 2);
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = Complex(0, -1);
  expected(1, 1) = Complex(0, 1);
  EXPECT_LT(max_abs_diff(u, expected), 1e-15);
}

TEST(UnitaryExp, UnitarityAndTaylorAgreement) {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix h = random_hermitian(rng, 5);
    const ComplexMatrix u = unitary_exp(h, 0.7);
    EXPECT_LT(max_abs_diff(u * u.adjoint(), identity(5)), 1e-12);

    const double t = 1e-4;
    const Complex i(0, 1);
    const ComplexMatrix h2 = h * h;
    const ComplexMatrix taylor =
        identity(5) - i * t * h - 0.5 * t * t * h2 + i * (t * t * t / 6.0) * h2 * h;
    EXPECT_LT(max_abs_diff(unitary_exp(h, t), taylor), 1e-14);
  }
}

TEST(UnitaryExp, GroupProperty) {
  Rng rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix h = random_hermitian(rng, 6);
    const double s = 0.3 + 0.1 * trial;
    const double t = -0.8 + 0.05 * trial;
    EXPECT_LT(max_abs_diff(unitary_exp(h, s) * unitary_exp(h, t), unitary_exp(h, s + t)), 1e-10);
  }
}

TEST(UnitaryExp, RejectsNonHermitian) {
  ComplexMatrix a(2, 2);
  a << 0, 1, 0, 0;
  EXPECT_THROW(unitary_exp(a, 1.0), Error);
}

}  // namespace
}  // namespace mixgeo
