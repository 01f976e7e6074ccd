#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mixgeo/error.hpp"
#include "mixgeo/hermitian.hpp"

namespace mixgeo {

inline constexpr double kDefaultRankTol = 1e-12;
inline constexpr double kDefaultDegeneracyTol = 1e-9;
inline constexpr double kAmbiguityGap = 1e-6;

/// Hermitian, unit-trace, positive semidefinite matrix. Validated on
/// construction; the stored matrix is exactly Hermitian.
class DensityOperator {
 public:
  explicit DensityOperator(const ComplexMatrix& m, double tol = kDefaultTol) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
      fail(ErrorKind::InvalidState, "density operator must be a non-empty square matrix");
    }
    if (!is_hermitian(m, tol)) fail(ErrorKind::InvalidState, "density operator is not Hermitian");
    matrix_ = 0.5 * (m + m.adjoint());
    const double tr = trace_real(matrix_);
    if (std::abs(tr - 1.0) > tol) {
      fail(ErrorKind::InvalidState, "trace " + std::to_string(tr) + " differs from 1");
    }
    const double lmin = eig_hermitian(matrix_, tol).values.minCoeff();
    if (lmin < -tol) {
      fail(ErrorKind::InvalidState, "negative eigenvalue " + std::to_string(lmin));
    }
  }

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }

 private:
  ComplexMatrix matrix_;
};

/// Kept part of a spectral decomposition rho = sum_k p_k |n_k><n_k|, with a
/// gauge phase f_k attached to each branch. Column k of `vectors` is |n_k>.
struct SpectralDecomposition {
  std::vector<double> probs;
  ComplexMatrix vectors;
  std::vector<double> phases;
  double discarded_mass = 0.0;

  std::size_t rank() const noexcept { return probs.size(); }
  Eigen::Index dim() const noexcept { return vectors.rows(); }
  double mass() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

  auto vector(std::size_t k) const { return vectors.col(static_cast<Eigen::Index>(k)); }

  /// sqrt(p_k) e^{i f_k} |n_k>
  ComplexVector weighted(std::size_t k) const {
    return std::sqrt(probs[k]) * std::polar(1.0, phases[k]) * vector(k);
  }

  ComplexMatrix reconstruct() const {
    ComplexMatrix rho = ComplexMatrix::Zero(dim(), dim());
    for (std::size_t k = 0; k < rank(); ++k) rho += probs[k] * vector(k) * vector(k).adjoint();
    return rho;
  }

  /// Builds a decomposition from explicit data; phases default to zero.
  static SpectralDecomposition from(std::vector<double> probs, ComplexMatrix vectors,
                                    std::vector<double> phases = {}) {
    if (static_cast<Eigen::Index>(probs.size()) != vectors.cols()) {
      fail(ErrorKind::InvalidArgument, "one eigenvector per probability required");
    }
    if (phases.empty()) phases.assign(probs.size(), 0.0);
    if (phases.size() != probs.size()) fail(ErrorKind::InvalidArgument, "phase count != rank");
    SpectralDecomposition d{std::move(probs), std::move(vectors), std::move(phases), 0.0};
    d.discarded_mass = 1.0 - d.mass();
    return d;
  }
};

inline SpectralDecomposition decompose(const DensityOperator& rho,
                                       double rank_tol = kDefaultRankTol,
                                       double degeneracy_tol = kDefaultDegeneracyTol) {
  const HermitianEigen e = eig_hermitian(rho.matrix());
  SpectralDecomposition d;
  std::vector<Eigen::Index> kept;
  double discarded = 0.0;
  // eig output ascends; walk it backwards for descending probabilities.
  for (Eigen::Index k = e.dim() - 1; k >= 0; --k) {
    if (e.values[k] > rank_tol) {
      kept.push_back(k);
    } else {
      discarded += e.values[k];
    }
  }
  if (kept.empty()) fail(ErrorKind::InvalidState, "no eigenvalue above rank_tol");
  for (std::size_t j = 1; j < kept.size(); ++j) {
    const double gap = e.values[kept[j - 1]] - e.values[kept[j]];
    if (gap <= degeneracy_tol) {
      fail(ErrorKind::DegenerateSpectrum,
           "eigenvalues " + std::to_string(e.values[kept[j]]) + " and " +
               std::to_string(e.values[kept[j - 1]]) + " are closer than degeneracy_tol");
    }
  }
  d.vectors.resize(e.dim(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) {
    d.probs.push_back(e.values[kept[j]]);
    d.vectors.col(static_cast<Eigen::Index>(j)) = e.vectors.col(kept[j]);
  }
  d.phases.assign(kept.size(), 0.0);
  d.discarded_mass = discarded;
  return d;
}

/// Reorders the branches of `next` to follow those of `prev` (greedy, largest
/// |overlap| first) and rotates each eigenvector so that <n_k(prev)|n_k(next)>
/// is real and non-negative.
inline SpectralDecomposition align_step(const SpectralDecomposition& prev,
                                        const SpectralDecomposition& next) {
  const std::size_t n = prev.rank();
  if (next.rank() != n) fail(ErrorKind::RankMismatch, "align_step needs equal ranks");
  if (next.dim() != prev.dim()) fail(ErrorKind::InvalidArgument, "dimension mismatch");

  const ComplexMatrix overlap = prev.vectors.adjoint() * next.vectors;  // <prev_k|next_l>
  const Eigen::MatrixXd mag = overlap.cwiseAbs();

  if (n > 1) {
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<double> row(n);
      for (std::size_t l = 0; l < n; ++l) row[l] = mag(k, l);
      std::partial_sort(row.begin(), row.begin() + 2, row.end(), std::greater<>());
      if (row[0] - row[1] < kAmbiguityGap) {
        fail(ErrorKind::AmbiguousMatching,
             "branch " + std::to_string(k) + " has two near-equal overlaps");
      }
    }
  }

  struct Candidate {
    double mag;
    std::size_t k, l;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(n * n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) candidates.push_back({mag(k, l), k, l});
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.mag > b.mag; });

  std::vector<std::size_t> match(n, n);
  std::vector<bool> taken(n, false);
  std::size_t assigned = 0;
  for (const Candidate& c : candidates) {
    if (assigned == n) break;
    if (match[c.k] != n || taken[c.l]) continue;
    match[c.k] = c.l;
    taken[c.l] = true;
    ++assigned;
  }

  SpectralDecomposition out;
  out.vectors.resize(next.dim(), static_cast<Eigen::Index>(n));
  out.probs.resize(n);
  out.phases.resize(n);
  out.discarded_mass = next.discarded_mass;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t l = match[k];
    const auto kk = static_cast<Eigen::Index>(k);
    const auto ll = static_cast<Eigen::Index>(l);
    ComplexVector v = next.vectors.col(ll);
    const Complex ov = overlap(kk, ll);
    if (std::abs(ov) > 0.0) v *= std::conj(ov) / std::abs(ov);
    out.vectors.col(kk) = v;
    out.probs[k] = next.probs[l];
    out.phases[k] = next.phases[l];
  }
  return out;
}

/// Time-ordered decompositions along a sampled path, branch-matched and in the
/// discrete parallel-transport gauge.
struct AlignedPath {
  std::vector<double> times;
  std::vector<SpectralDecomposition> decomps;

  std::size_t size() const noexcept { return times.size(); }
  std::size_t rank() const { return decomps.empty() ? 0 : decomps.front().rank(); }
};

namespace detail {

inline std::string at_time(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "at t=%.17g", t);
  return buf;
}

}  // namespace detail

/// Builds an AlignedPath from a callable t -> DensityOperator. The result does
/// not depend on how the callable fixes eigenvector phases.
template <class Family>
AlignedPath sample_path(Family&& family, std::span<const double> grid,
                        double rank_tol = kDefaultRankTol,
                        double degeneracy_tol = kDefaultDegeneracyTol) {
  if (grid.empty()) fail(ErrorKind::InvalidArgument, "empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) fail(ErrorKind::InvalidArgument, "grid not strictly increasing");
  }
  AlignedPath path;
  path.times.assign(grid.begin(), grid.end());
  path.decomps.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      SpectralDecomposition d = decompose(family(grid[i]), rank_tol, degeneracy_tol);
      if (i == 0) {
        path.decomps.push_back(std::move(d));
        continue;
      }
      if (d.rank() != path.decomps.back().rank()) {
        fail(ErrorKind::RankChange, "rank changed from " +
                                        std::to_string(path.decomps.back().rank()) + " to " +
                                        std::to_string(d.rank()));
      }
      path.decomps.push_back(align_step(path.decomps.back(), d));
    } catch (const Error& e) {
      throw e.with_context(detail::at_time(grid[i]));
    }
  }
  return path;
}

/// Uniform grid with `points` samples on [start, stop].
inline std::vector<double> linspace(double start, double stop, std::size_t points) {
  if (points < 2) fail(ErrorKind::InvalidArgument, "grid needs at least two points");
  std::vector<double> g(points);
  const double h = (stop - start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = start + h * static_cast<double>(i);
  g.back() = stop;
  return g;
}

}  // namespace mixgeo
