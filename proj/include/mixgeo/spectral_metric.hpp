#pragma once

// Distance between nearby spectral decompositions, its gauge-minimized form
// (the line element), the infinitesimal Fubini-Study + Fisher-Rao split, and
// chord-summed path lengths.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mixgeo/error.hpp"
#include "mixgeo/state_space.hpp"

namespace mixgeo {

/// ds^2 = sum_k p_k ds_k^2 + 1/4 sum_k dp_k^2 / p_k at one grid point.
struct LineElementBreakdown {
  double total = 0.0;
  std::vector<double> fubini_study_terms;  // p_k ds_k^2
  double fisher_rao = 0.0;
};

namespace detail {

inline void require_same_rank(const SpectralDecomposition& a, const SpectralDecomposition& b) {
  if (a.rank() != b.rank()) {
    fail(ErrorKind::RankMismatch,
         "ranks " + std::to_string(a.rank()) + " and " + std::to_string(b.rank()) + " differ");
  }
  if (a.dim() != b.dim()) fail(ErrorKind::InvalidArgument, "Hilbert dimensions differ");
}

/// Second-order three-point derivative weights at the middle of a possibly
/// non-uniform stencil (t_{i-1}, t_i, t_{i+1}).
struct Stencil {
  double wm, w0, wp;
};

inline Stencil central_weights(double tm, double t0, double tp) {
  const double hm = t0 - tm;
  const double hp = tp - t0;
  return {-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp))};
}

inline void require_interior(const AlignedPath& path, std::size_t i) {
  if (path.size() < 3 || i == 0 || i + 1 >= path.size()) {
    fail(ErrorKind::IndexOutOfRange,
         "index " + std::to_string(i) + " is not an interior point of a path with " +
             std::to_string(path.size()) + " samples");
  }
}

inline double wrap_angle(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

}  // namespace detail

/// Sum_k || sqrt(p_k) e^{i f_k} |n_k> - sqrt(q_k) e^{i g_k} |m_k> ||^2 at the
/// stored phases, expanded exactly.
inline double decomposition_distance_sq(const SpectralDecomposition& a,
                                        const SpectralDecomposition& b) {
  detail::require_same_rank(a, b);
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.rank(); ++k) {
    const Complex ov = a.vector(k).dot(b.vector(k));  // <n_k|m_k>
    const Complex phase = std::polar(1.0, b.phases[k] - a.phases[k]);
    d2 += a.probs[k] + b.probs[k] - 2.0 * std::sqrt(a.probs[k] * b.probs[k]) * (phase * ov).real();
  }
  return d2;
}

/// The distance above minimized over all gauge phases:
/// sum_k (p_k + q_k) - 2 sum_k sqrt(p_k q_k) |<n_k|m_k>|, which is
/// 2 - 2 sum_k sqrt(p_k q_k) |<n_k|m_k>| for full-mass decompositions.
inline double line_element_sq(const SpectralDecomposition& a, const SpectralDecomposition& b) {
  detail::require_same_rank(a, b);
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.rank(); ++k) {
    const double ov = std::abs(a.vector(k).dot(b.vector(k)));
    d2 += a.probs[k] + b.probs[k] - 2.0 * std::sqrt(a.probs[k] * b.probs[k]) * ov;
  }
  return std::max(d2, 0.0);
}

/// Infinitesimal line element at interior sample i, evaluated for the step
/// dt = t_{i+1} - t_i with derivatives from three-point differences.
inline LineElementBreakdown differential_line_element(const AlignedPath& path, std::size_t i) {
  detail::require_interior(path, i);
  const auto& dm = path.decomps[i - 1];
  const auto& d0 = path.decomps[i];
  const auto& dp = path.decomps[i + 1];
  const auto w = detail::central_weights(path.times[i - 1], path.times[i], path.times[i + 1]);
  const double dt = path.times[i + 1] - path.times[i];

  LineElementBreakdown out;
  out.fubini_study_terms.resize(d0.rank());
  for (std::size_t k = 0; k < d0.rank(); ++k) {
    const ComplexVector n = d0.vector(k);
    const ComplexVector ndot = w.wm * dm.vector(k) + w.w0 * n + w.wp * dp.vector(k);
    const double fs_rate = std::max(ndot.squaredNorm() - std::norm(n.dot(ndot)), 0.0);
    out.fubini_study_terms[k] = d0.probs[k] * fs_rate * dt * dt;

    const double pdot = w.wm * dm.probs[k] + w.w0 * d0.probs[k] + w.wp * dp.probs[k];
    out.fisher_rao += 0.25 * pdot * pdot * dt * dt / d0.probs[k];
  }
  out.total = out.fisher_rao;
  for (double term : out.fubini_study_terms) out.total += term;
  return out;
}

/// Sum of step chords sqrt(line_element_sq) along the path.
inline double path_length(const AlignedPath& path) {
  if (path.size() < 2) fail(ErrorKind::InvalidArgument, "path length needs at least two samples");
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    len += std::sqrt(line_element_sq(path.decomps[i], path.decomps[i + 1]));
  }
  return len;
}

/// max_k | f_k' - i <n_k|n_k'> | at interior sample i. Vanishes (to
/// discretization error) when the stored gauge is parallel transported.
inline double check_connection(const AlignedPath& path, std::size_t i) {
  detail::require_interior(path, i);
  const auto& dm = path.decomps[i - 1];
  const auto& d0 = path.decomps[i];
  const auto& dp = path.decomps[i + 1];
  const auto w = detail::central_weights(path.times[i - 1], path.times[i], path.times[i + 1]);

  double worst = 0.0;
  for (std::size_t k = 0; k < d0.rank(); ++k) {
    const ComplexVector n = d0.vector(k);
    const ComplexVector ndot = w.wm * dm.vector(k) + w.w0 * n + w.wp * dp.vector(k);
    // Unwrapped phase derivative; only phase differences enter.
    const double back = detail::wrap_angle(d0.phases[k] - dm.phases[k]);
    const double fwd = detail::wrap_angle(dp.phases[k] - d0.phases[k]);
    const double fdot = w.wm * (-back) + w.wp * fwd;
    const Complex residual = fdot - Complex(0.0, 1.0) * n.dot(ndot);
    worst = std::max(worst, std::abs(residual));
  }
  return worst;
}

}  // namespace mixgeo
