#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "test_support.hpp"

namespace mixgeo {
namespace {

using testing::diag;
using testing::identity;
using testing::max_abs_diff;

TEST(BeamSplitter, PreservesNormAndInvertsWithAdjoint) {
  Rng rng(1);
  InterferometerState s(3, 2);
  s.amplitudes() = random_ginibre(rng, 12).col(0);
  const double n0 = s.norm();
  const InterferometerState b = beam_splitter(s);
  EXPECT_NEAR(b.norm(), n0, 1e-14);
  EXPECT_LT((beam_splitter_adjoint(b).amplitudes() - s.amplitudes()).norm(), 1e-14);
}

TEST(BeamSplitter, ActionOnBasisStates) {
  const double c = 1.0 / std::numbers::sqrt2;
  ComplexVector one(1);
  one << 1.0;
  const InterferometerState from0 = beam_splitter(InterferometerState::in_beam(0, one, 1));
  const InterferometerState from1 = beam_splitter(InterferometerState::in_beam(1, one, 1));
  // |0> -> (|0> + |1>)/sqrt2, |1> -> (|1> - |0>)/sqrt2
  EXPECT_NEAR(from0.arm(0)[0].real(), c, 1e-15);
  EXPECT_NEAR(from0.arm(1)[0].real(), c, 1e-15);
  EXPECT_NEAR(from1.arm(0)[0].real(), -c, 1e-15);
  EXPECT_NEAR(from1.arm(1)[0].real(), c, 1e-15);
}

TEST(Interferometer, IdenticalArmsGiveFullVisibility) {
  const auto r = run_unitary(DensityOperator(diag({0.8, 0.2})), 0.5 * pauli_x(), 0.0, {0.0, 0.0});
  EXPECT_NEAR(r.p0, 1.0, 1e-15);
  EXPECT_NEAR(r.p1, 0.0, 1e-15);
  EXPECT_NEAR(r.p0_closed_form, 1.0, 1e-15);
}

TEST(Interferometer, OppositeReferencePhaseSendsAllToPortOne) {
  const double pi = std::numbers::pi;
  const auto r = run_unitary(DensityOperator(diag({0.8, 0.2})), 0.5 * pauli_x(), 0.0, {pi, pi});
  EXPECT_NEAR(r.p0, 0.0, 1e-15);
  EXPECT_NEAR(r.p1, 1.0, 1e-15);
}

TEST(Interferometer, ClosedFormMatchesSimulation) {
  Rng rng(2024);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_int_distribution<int> dim(2, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = dim(rng);
    const DensityOperator rho = random_density(rng, n, -1, 0.01, 0.01);
    const ComplexMatrix h = random_hermitian(rng, n);
    std::vector<double> phases(static_cast<std::size_t>(n));
    for (double& f : phases) f = angle(rng);
    const auto r = run_unitary(rho, h, 0.3, phases);
    EXPECT_NEAR(r.p0, r.p0_closed_form, 1e-12);
    EXPECT_NEAR(r.p0 + r.p1, 1.0, 1e-12);
  }
}

TEST(Interferometer, RankDeficientStateUsesIdentityOffSupport) {
  Rng rng(3);
  const DensityOperator rho = random_density(rng, 4, 2);
  const ComplexMatrix h = random_hermitian(rng, 4);
  const auto r = run_unitary(rho, h, 0.2, {0.3, -0.4});
  EXPECT_NEAR(r.p0, r.p0_closed_form, 1e-12);
}

TEST(Visibility, RotatingQubitLoss) {
  const auto m = maximize_P0(DensityOperator(diag({0.8, 0.2})), 0.5 * pauli_x(), 0.01);
  EXPECT_NEAR(1.0 - m.p0_max, 0.5 * (1.0 - std::cos(0.005)), 1e-16);
  EXPECT_NEAR(1.0 - m.p0_max, 6.25e-6, 1e-10);
  EXPECT_NEAR(m.phases[0], 0.0, 1e-15);
}

TEST(Visibility, MaximumDominatesPhaseGrid) {
  Rng rng(8);
  const DensityOperator rho = random_density(rng, 2);
  const ComplexMatrix h = random_hermitian(rng, 2);
  const double dt = 0.4;
  const auto m = maximize_P0(rho, h, dt);
  double best = 0.0;
  const int points = 360;
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; j += 1) {
      const double fi = 2.0 * std::numbers::pi * i / points;
      const double fj = 2.0 * std::numbers::pi * j / points;
      best = std::max(best, run_unitary(rho, h, dt, {fi, fj}).p0_closed_form);
    }
  }
  EXPECT_LE(best, m.p0_max + 1e-15);
  EXPECT_NEAR(best, m.p0_max, 1e-4);
  EXPECT_NEAR(run_unitary(rho, h, dt, m.phases).p0, m.p0_max, 1e-12);
}

TEST(Visibility, LossApproachesAverageDispersionAtSecondOrder) {
  Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityOperator rho = random_density(rng, 3);
    const ComplexMatrix h = random_hermitian(rng, 3);
    const double target = dispersions(rho, h).avg_dispersion_sq;
    auto err = [&](double dt) {
      return std::abs(4.0 * (1.0 - maximize_P0(rho, h, dt).p0_max) / (dt * dt) - target);
    };
    const double ratio = err(0.02) / err(0.01);
    EXPECT_GT(ratio, 3.5);
    EXPECT_LT(ratio, 4.5);
  }
}

TEST(Visibility, VanishingOverlapReported) {
  // U = exp(-i pi sigma_x / 2) = -i sigma_x swaps the eigenvectors of sigma_z.
  try {
    maximize_P0(DensityOperator(diag({0.8, 0.2})), 0.5 * pauli_x(), std::numbers::pi);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::VanishingOverlap);
  }
}

TEST(Purified, FisherAdditionForPureProbabilityShift) {
  const DensityOperator rho(diag({0.8, 0.2}));
  const SpectralDecomposition d = decompose(rho);
  const double eps = 1e-3;
  const NonunitaryStep step{{eps, -eps}, identity(2), {0.0, 0.0}};
  const auto r = run_purified(d, step);
  EXPECT_NEAR(1.0 - r.p0, 3.90625e-7, 2e-9);  // cubic terms are ~7e-10
  EXPECT_NEAR(predicted_visibility_loss(d, 0.5 * pauli_x(), 0.0, step.delta_p), 3.90625e-7, 1e-18);
  EXPECT_NEAR(r.output.norm(), 1.0, 1e-14);
}

TEST(Purified, ExactLossMatchesOverlapFormula) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const SpectralDecomposition d = decompose(random_density(rng, 3));
    const ComplexMatrix u = unitary_exp(random_hermitian(rng, 3), 0.05);
    const std::vector<double> dp{0.01, -0.004, -0.006};
    const NonunitaryStep step{dp, u, optimal_phases(d, u)};
    EXPECT_NEAR(1.0 - run_purified(d, step).p0, oracles::purified_loss_exact(d, u, dp), 1e-13);
  }
}

TEST(Purified, SeriesAgreesToThirdOrder) {
  Rng rng(32);
  const SpectralDecomposition d = decompose(random_density(rng, 3));
  const ComplexMatrix h = random_hermitian(rng, 3);
  auto gap = [&](double eps) {
    const std::vector<double> dp{eps, -0.3 * eps, -0.7 * eps};
    const ComplexMatrix u = unitary_exp(h, eps);
    const NonunitaryStep step{dp, u, optimal_phases(d, u)};
    const double actual = 1.0 - run_purified(d, step).p0;
    return std::abs(actual - predicted_visibility_loss(d, h, eps, dp));
  };
  const double g1 = gap(4e-3);
  const double g2 = gap(2e-3);
  EXPECT_LT(g1, 1e-5);
  EXPECT_GT(g1 / g2, 6.0);
  EXPECT_LT(g1 / g2, 10.0);
}

TEST(Purified, ArmCarriesShiftedState) {
  Rng rng(33);
  const SpectralDecomposition d = decompose(random_density(rng, 3));
  const ComplexMatrix u = random_unitary(rng, 3);
  const std::vector<double> dp{0.02, -0.01, -0.01};
  const NonunitaryStep step{dp, u, {0.0, 0.0, 0.0}};
  ComplexMatrix expected = ComplexMatrix::Zero(3, 3);
  for (std::size_t k = 0; k < 3; ++k) {
    const ComplexVector m = u * d.vector(k);
    expected += (d.probs[k] + dp[k]) * m * m.adjoint();
  }
  EXPECT_LT(max_abs_diff(purified_arm_state(d, step), expected), 1e-14);
}

TEST(Purified, ZeroShiftReproducesUnitaryRun) {
  Rng rng(34);
  const DensityOperator rho = random_density(rng, 3);
  const ComplexMatrix h = random_hermitian(rng, 3);
  const SpectralDecomposition d = decompose(rho);
  const ComplexMatrix u = unitary_exp(h, 0.1);
  const NonunitaryStep step{{0.0, 0.0, 0.0}, u, optimal_phases(d, u)};
  EXPECT_NEAR(run_purified(d, step).p0, maximize_P0(rho, h, 0.1).p0_max, 1e-13);
}

TEST(Purified, InvalidStepsRejected) {
  const SpectralDecomposition d = decompose(DensityOperator(diag({0.8, 0.2})));
  auto kind = [&](const NonunitaryStep& s) {
    try {
      run_purified(d, s);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::ConfigError;
  };
  EXPECT_EQ(kind({{0.1, 0.0}, identity(2), {0.0, 0.0}}), ErrorKind::InvalidStep);
  EXPECT_EQ(kind({{0.3, -0.3}, identity(2), {0.0, 0.0}}), ErrorKind::InvalidStep);
  EXPECT_EQ(kind({{0.0}, identity(2), {0.0, 0.0}}), ErrorKind::InvalidStep);
  EXPECT_EQ(kind({{0.0, 0.0}, 2.0 * identity(2), {0.0, 0.0}}), ErrorKind::InvalidStep);
}

}  // namespace
}  // namespace mixgeo
