#pragma once

#include <vector>

#include "qhdyn/types.hpp"

namespace qhdyn {

enum class RealityPolicy { kAssert, kReport };

inline constexpr double kExceptionalPointOverlap = 1e-8;
inline constexpr double kRealityTolerance = 1e-10;
inline constexpr double kMatchingAmbiguity = 1e-6;

/// Eigenvalues with paired right kets |n> (columns of `right`) and left bras
/// <<n| (rows of `left`), normalized so that <<m|n> = delta_mn.
///
/// Gauge: each |n> has unit 2-norm and its component at index gauge_pivots[n]
/// has argument gauge_phases[n] (zero for a fresh decomposition, in which case
/// the pivot is the largest-magnitude component). <<n| follows from
/// biorthonormality.
struct BiorthogonalFrame {
  double t = 0.0;
  Vector energies;
  Matrix right;
  Matrix left;
  /// |<l_n|r_n>| for unit-normalized left and right eigenvectors, i.e. the
  /// inverse eigenvalue condition number. Small values flag an exceptional point.
  RealVector raw_overlaps;
  std::vector<Eigen::Index> gauge_pivots;
  std::vector<double> gauge_phases;

  Eigen::Index size() const { return energies.size(); }
};

/// Biorthogonal eigensystem of a (generally non-Hermitian) matrix. Eigenpairs are
/// ordered by ascending real part, then imaginary part.
///
/// Throws ExceptionalPointError if any raw overlap is below 1e-8 and, under
/// RealityPolicy::kAssert, ComplexSpectrumError if any |Im E_n| >= 1e-10.
BiorthogonalFrame eig_biorthogonal(const Matrix& h, RealityPolicy policy, double t = 0.0);

/// Reorders and re-phases `cur` to continue `prev`: each previous eigenpair is
/// matched to the current one with the largest |<<n_prev|n_cur>|, the gauge of
/// `prev` is carried over, and biorthonormality is re-imposed.
///
/// Throws AmbiguousMatchingError when the best and second-best candidates are
/// within 1e-6 or the matching is not a permutation.
BiorthogonalFrame track_continuity(const BiorthogonalFrame& prev, const BiorthogonalFrame& cur);

/// Sum_n |n> E_n <<n|.
Matrix reconstruct(const BiorthogonalFrame& frame);

double biorthonormality_residual(const BiorthogonalFrame& frame);
double completeness_residual(const BiorthogonalFrame& frame);
/// max over n of max(|H|n> - E_n|n>|, |<<n|H - E_n<<n||).
double eigen_residual(const BiorthogonalFrame& frame, const Matrix& h);

}  // namespace qhdyn
