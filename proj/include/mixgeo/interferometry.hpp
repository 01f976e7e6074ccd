#pragma once

// Mach-Zehnder interferometer simulated on explicit state vectors over
// beam (2) x internal (N) x ancilla (A). The first splitter maps
// |x> -> 2^{-1/2}(|x> + (-1)^x |x xor 1>); recombination uses its adjoint so
// that identical arms send every particle to output port 0.

#include <cmath>
#include <numbers>
#include <vector>

#include "mixgeo/hermitian.hpp"
#include "mixgeo/state_space.hpp"
#include "mixgeo/unitary_dynamics.hpp"

namespace mixgeo {

class InterferometerState {
 public:
  InterferometerState(Eigen::Index internal_dim, Eigen::Index ancilla_dim = 1)
      : internal_(internal_dim),
        ancilla_(ancilla_dim),
        amps_(ComplexVector::Zero(2 * internal_dim * ancilla_dim)) {
    if (internal_dim < 1 || ancilla_dim < 1) {
      fail(ErrorKind::InvalidArgument, "interferometer dimensions must be positive");
    }
  }

  /// |beam> (x) psi, where psi lives on internal (x) ancilla.
  static InterferometerState in_beam(int beam, const ComplexVector& psi, Eigen::Index internal_dim) {
    if (psi.size() % internal_dim != 0) fail(ErrorKind::InvalidArgument, "bad amplitude size");
    InterferometerState s(internal_dim, psi.size() / internal_dim);
    s.arm(beam) = psi;
    return s;
  }

  Eigen::Index internal_dim() const noexcept { return internal_; }
  Eigen::Index ancilla_dim() const noexcept { return ancilla_; }
  Eigen::Index arm_size() const noexcept { return internal_ * ancilla_; }

  Eigen::VectorBlock<ComplexVector> arm(int beam) {
    return amps_.segment(beam * arm_size(), arm_size());
  }
  Eigen::VectorBlock<const ComplexVector> arm(int beam) const {
    return amps_.segment(beam * arm_size(), arm_size());
  }

  const ComplexVector& amplitudes() const noexcept { return amps_; }
  ComplexVector& amplitudes() noexcept { return amps_; }

  double norm() const { return amps_.norm(); }
  double beam_probability(int beam) const { return arm(beam).squaredNorm(); }

  /// Reduced internal state of one arm, Tr_ancilla |arm><arm| (unnormalized).
  ComplexMatrix reduced_internal(int beam) const {
    const ComplexVector a = arm(beam);
    const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        x(a.data(), internal_, ancilla_);
    return x * x.adjoint();
  }

 private:
  Eigen::Index internal_;
  Eigen::Index ancilla_;
  ComplexVector amps_;
};

inline InterferometerState beam_splitter(const InterferometerState& s) {
  InterferometerState out = s;
  const double c = 1.0 / std::numbers::sqrt2;
  out.arm(0) = c * (s.arm(0) - s.arm(1));
  out.arm(1) = c * (s.arm(0) + s.arm(1));
  return out;
}

inline InterferometerState beam_splitter_adjoint(const InterferometerState& s) {
  InterferometerState out = s;
  const double c = 1.0 / std::numbers::sqrt2;
  out.arm(0) = c * (s.arm(0) + s.arm(1));
  out.arm(1) = c * (s.arm(1) - s.arm(0));
  return out;
}

/// Applies op (x) 1_ancilla to the given arm.
inline void apply_internal(InterferometerState& s, int beam, const ComplexMatrix& op) {
  if (op.rows() != s.internal_dim() || op.cols() != s.internal_dim()) {
    fail(ErrorKind::InvalidArgument, "internal operator has wrong dimension");
  }
  ComplexVector a = s.arm(beam);
  Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(
      a.data(), s.internal_dim(), s.ancilla_dim());
  x = (op * x).eval();
  s.arm(beam) = a;
}

/// V = sum_k e^{i f_k} |n_k><n_k| + (identity on the discarded support); it
/// commutes with rho by construction.
inline ComplexMatrix reference_unitary(const SpectralDecomposition& d,
                                       const std::vector<double>& phases) {
  if (phases.size() != d.rank()) fail(ErrorKind::InvalidArgument, "one phase per branch required");
  const auto n = d.dim();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  for (std::size_t k = 0; k < d.rank(); ++k) {
    v += (std::polar(1.0, phases[k]) - 1.0) * d.vector(k) * d.vector(k).adjoint();
  }
  return v;
}

struct InterferenceResult {
  double p0 = 0.0;  // tensor simulation
  double p1 = 0.0;  // tensor simulation
  double p0_closed_form = 0.0;
};

/// Output probabilities for U(delta_t) = exp(-i H delta_t) in arm 0 and V in
/// arm 1. The simulation averages pure runs over the eigen-ensemble of rho;
/// the closed form is 1/2 + 1/2 Re sum_k p_k <n_k|U|n_k> e^{-i f_k}.
inline InterferenceResult run_unitary(const DensityOperator& rho, const ComplexMatrix& h,
                                      double delta_t, const std::vector<double>& phases) {
  const SpectralDecomposition d = decompose(rho);
  const ComplexMatrix u = unitary_exp(h, delta_t);
  const ComplexMatrix v = reference_unitary(d, phases);

  InterferenceResult r;
  Complex closed = 0.0;
  for (std::size_t k = 0; k < d.rank(); ++k) {
    const ComplexVector n = d.vector(k);
    closed += d.probs[k] * n.dot(u * n) * std::polar(1.0, -phases[k]);

    InterferometerState s = beam_splitter(InterferometerState::in_beam(0, n, d.dim()));
    apply_internal(s, 0, u);
    apply_internal(s, 1, v);
    s = beam_splitter_adjoint(s);
    r.p0 += d.probs[k] * s.beam_probability(0);
    r.p1 += d.probs[k] * s.beam_probability(1);
  }
  r.p0_closed_form = 0.5 + 0.5 * closed.real();
  return r;
}

struct VisibilityMaximum {
  double p0_max = 0.0;
  std::vector<double> phases;  // f*_k = arg <n_k|U|n_k>
};

inline VisibilityMaximum maximize_P0(const DensityOperator& rho, const ComplexMatrix& h,
                                     double delta_t) {
  const SpectralDecomposition d = decompose(rho);
  const ComplexMatrix u = unitary_exp(h, delta_t);
  VisibilityMaximum m;
  m.p0_max = 0.5;
  for (std::size_t k = 0; k < d.rank(); ++k) {
    const Complex ov = d.vector(k).dot(u * d.vector(k));
    if (std::abs(ov) < 1e-12) {
      fail(ErrorKind::VanishingOverlap, "<n_k|U|n_k> vanishes for branch " + std::to_string(k));
    }
    m.phases.push_back(std::arg(ov));
    m.p0_max += 0.5 * d.probs[k] * std::abs(ov);
  }
  return m;
}

/// Probability shifts and arm unitaries for the purified (nonunitary) scheme.
struct NonunitaryStep {
  std::vector<double> delta_p;
  ComplexMatrix unitary;
  std::vector<double> phases;
};

namespace detail {

inline void validate_step(const SpectralDecomposition& d, const NonunitaryStep& step) {
  const std::size_t n = d.rank();
  if (step.delta_p.size() != n || step.phases.size() != n) {
    fail(ErrorKind::InvalidStep, "delta_p and phases need one entry per branch");
  }
  if (step.unitary.rows() != d.dim() || !is_unitary(step.unitary)) {
    fail(ErrorKind::InvalidStep, "arm operator must be unitary on the internal space");
  }
  double sum_dp = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double pk = d.probs[k] + step.delta_p[k];
    if (pk < -1e-12 || pk > 1.0 + 1e-12) {
      fail(ErrorKind::InvalidStep, "p_k + delta_p_k leaves [0, 1] for branch " + std::to_string(k));
    }
    sum_dp += step.delta_p[k];
    total += pk;
  }
  if (std::abs(sum_dp) > 1e-12 || std::abs(total - d.mass()) > 1e-12) {
    fail(ErrorKind::InvalidStep, "probability shifts must sum to zero");
  }
}

/// Amplitudes on internal (x) ancilla of sum_k c_k |v_k> (x) |a_k>.
inline ComplexVector purification(const std::vector<Complex>& coeffs,
                                  const ComplexMatrix& vectors) {
  const auto n = vectors.rows();
  const auto a = static_cast<Eigen::Index>(coeffs.size());
  ComplexVector psi = ComplexVector::Zero(n * a);
  for (Eigen::Index k = 0; k < a; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) psi[i * a + k] += coeffs[k] * vectors(i, k);
  }
  return psi;
}

struct PurifiedArms {
  ComplexVector psi;     // sum_k sqrt(p_k) |n_k>|a_k>
  ComplexVector w_psi;   // sum_k sqrt(p_k + dp_k) U|n_k>|a_k>
};

inline PurifiedArms purified_arms(const SpectralDecomposition& d, const NonunitaryStep& step) {
  validate_step(d, step);
  const std::size_t n = d.rank();
  std::vector<Complex> c(n), cw(n);
  for (std::size_t k = 0; k < n; ++k) {
    c[k] = std::sqrt(d.probs[k]);
    cw[k] = std::sqrt(std::max(d.probs[k] + step.delta_p[k], 0.0));
  }
  const ComplexMatrix moved = step.unitary * d.vectors;
  return {purification(c, d.vectors), purification(cw, moved)};
}

/// W is only specified through W|Psi>; it acts on the line spanned by |Psi>.
inline ComplexVector apply_on_span(const ComplexVector& chi, const ComplexVector& psi,
                                   const ComplexVector& image) {
  const Complex c = psi.dot(chi) / psi.squaredNorm();
  if ((chi - c * psi).norm() > 1e-12 * std::max(1.0, chi.norm())) {
    fail(ErrorKind::InvalidArgument, "state outside the span on which W is defined");
  }
  return c * image;
}

}  // namespace detail

struct PurifiedResult {
  double p0 = 0.0;
  InterferometerState output;  // full normalized state after recombination
};

/// Purified run: |0> (x) |Psi> through splitter, W on arm 0, V (x) 1 on arm 1,
/// adjoint splitter. With f_k = arg <n_k|U|n_k>,
/// 1 - P0 = 1/4 [mean dE^2 dt^2 + 1/4 sum_k dp_k^2 / p_k] + higher order.
inline PurifiedResult run_purified(const SpectralDecomposition& d, const NonunitaryStep& step) {
  const detail::PurifiedArms arms = detail::purified_arms(d, step);
  const ComplexMatrix v = reference_unitary(d, step.phases);

  InterferometerState s =
      beam_splitter(InterferometerState::in_beam(0, arms.psi / arms.psi.norm(), d.dim()));
  s.arm(0) = detail::apply_on_span(s.arm(0), arms.psi, arms.w_psi);
  apply_internal(s, 1, v);
  s = beam_splitter_adjoint(s);
  return {s.beam_probability(0), s};
}

/// Reduced internal state carried by the W arm, Tr_a W|Psi><Psi|W^dagger.
inline ComplexMatrix purified_arm_state(const SpectralDecomposition& d, const NonunitaryStep& step) {
  const detail::PurifiedArms arms = detail::purified_arms(d, step);
  return InterferometerState::in_beam(0, arms.w_psi, d.dim()).reduced_internal(0);
}

/// Per-branch optimal reference phases f_k = arg <n_k|U|n_k>.
inline std::vector<double> optimal_phases(const SpectralDecomposition& d, const ComplexMatrix& u) {
  std::vector<double> f;
  for (std::size_t k = 0; k < d.rank(); ++k) {
    const Complex ov = d.vector(k).dot(u * d.vector(k));
    if (std::abs(ov) < 1e-12) {
      fail(ErrorKind::VanishingOverlap, "<n_k|U|n_k> vanishes for branch " + std::to_string(k));
    }
    f.push_back(std::arg(ov));
  }
  return f;
}

/// Leading-order prediction for 1 - P0 in the purified scheme.
inline double predicted_visibility_loss(const SpectralDecomposition& d, const ComplexMatrix& h,
                                        double delta_t, const std::vector<double>& delta_p) {
  double fisher = 0.0;
  for (std::size_t k = 0; k < d.rank(); ++k) fisher += delta_p[k] * delta_p[k] / d.probs[k];
  return 0.25 * (dispersions(d, h).avg_dispersion_sq * delta_t * delta_t + 0.25 * fisher);
}

}  // namespace mixgeo
