#include "qhdyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "qhdyn/errors.hpp"

namespace qhdyn {

namespace {

// A gauge pivot must keep at least this fraction of the largest component,
// otherwise its phase is numerically meaningless and the pivot is moved.
constexpr double kPivotFloor = 1e-3;
constexpr double kPivotTie = 1e-9;

Eigen::Index largest_component(const Vector& v) {
  const double largest = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= largest * (1.0 - kPivotTie)) return i;
  }
  return 0;
}

// Multiplies |n> by `phase` and <<n| by its inverse.
void rephase(BiorthogonalFrame& frame, Eigen::Index n, Complex phase) {
  frame.right.col(n) *= phase;
  frame.left.row(n) *= std::conj(phase);
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace

BiorthogonalFrame eig_biorthogonal(const Matrix& h, RealityPolicy policy, double t) {
  if (h.rows() != h.cols() || h.rows() == 0) throw NumericalError("eig_biorthogonal: matrix must be square");
  if (!all_finite(h)) throw NumericalError("eig_biorthogonal: matrix has non-finite entries");
  const Eigen::Index n = h.rows();

  const Eigen::ComplexEigenSolver<Matrix> solver(h, true);
  if (solver.info() != Eigen::Success) throw NumericalError("eig_biorthogonal: eigensolver did not converge");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const Vector& values = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (values(a).real() != values(b).real()) return values(a).real() < values(b).real();
    return values(a).imag() < values(b).imag();
  });

  BiorthogonalFrame frame;
  frame.t = t;
  frame.energies.resize(n);
  frame.right.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    frame.energies(k) = values(src);
    frame.right.col(k) = solver.eigenvectors().col(src).normalized();
  }

  frame.left = frame.right.partialPivLu().inverse();
  frame.raw_overlaps.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double left_norm = frame.left.row(k).norm();
    frame.raw_overlaps(k) = std::isfinite(left_norm) && left_norm > 0.0 ? 1.0 / left_norm : 0.0;
  }
  if (!all_finite(frame.left) || frame.raw_overlaps.minCoeff() < kExceptionalPointOverlap) {
    std::ostringstream msg;
    msg << "exceptional point at t = " << t << ": left-right eigenvector overlap "
        << frame.raw_overlaps.minCoeff() << " below " << kExceptionalPointOverlap
        << " (matrix is defective or nearly so)";
    throw ExceptionalPointError(msg.str());
  }

  frame.gauge_pivots.resize(static_cast<std::size_t>(n));
  frame.gauge_phases.assign(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index p = largest_component(frame.right.col(k));
    frame.gauge_pivots[static_cast<std::size_t>(k)] = p;
    const Complex c = frame.right(p, k);
    rephase(frame, k, std::conj(c) / std::abs(c));
  }

  if (policy == RealityPolicy::kAssert) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (std::abs(frame.energies(k).imag()) >= kRealityTolerance) {
        std::ostringstream msg;
        msg << "complex spectrum at t = " << t << ": E_" << k << " = " << frame.energies(k).real() << " + "
            << frame.energies(k).imag() << "i";
        throw ComplexSpectrumError(msg.str());
      }
    }
  }
  return frame;
}

BiorthogonalFrame track_continuity(const BiorthogonalFrame& prev, const BiorthogonalFrame& cur) {
  const Eigen::Index n = prev.size();
  if (cur.size() != n) throw NumericalError("track_continuity: frame dimensions differ");

  const Eigen::MatrixXd overlap = (prev.left * cur.right).cwiseAbs();
  std::vector<Eigen::Index> match(static_cast<std::size_t>(n));
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    overlap.row(i).maxCoeff(&best);
    double second = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != best) second = std::max(second, overlap(i, j));
    }
    if (overlap(i, best) - second < kMatchingAmbiguity) {
      std::ostringstream msg;
      msg << "ambiguous eigenpair matching at t = " << cur.t << " for level " << i << " (overlaps "
          << overlap(i, best) << " and " << second << ")";
      throw AmbiguousMatchingError(msg.str());
    }
    if (used[static_cast<std::size_t>(best)]) {
      std::ostringstream msg;
      msg << "eigenpair matching at t = " << cur.t << " is not a permutation";
      throw AmbiguousMatchingError(msg.str());
    }
    used[static_cast<std::size_t>(best)] = true;
    match[static_cast<std::size_t>(i)] = best;
  }

  BiorthogonalFrame out;
  out.t = cur.t;
  out.energies.resize(n);
  out.right.resize(n, n);
  out.raw_overlaps.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto j = match[static_cast<std::size_t>(i)];
    out.energies(i) = cur.energies(j);
    out.right.col(i) = cur.right.col(j).normalized();
    out.raw_overlaps(i) = cur.raw_overlaps(j);
  }
  out.left = out.right.partialPivLu().inverse();
  out.gauge_pivots = prev.gauge_pivots;
  out.gauge_phases = prev.gauge_phases;

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const Eigen::Index p = out.gauge_pivots[idx];
    const Complex c = out.right(p, i);
    const double largest = out.right.col(i).cwiseAbs().maxCoeff();
    bool transported = false;
    if (std::abs(c) >= kPivotFloor * largest) {
      rephase(out, i, std::polar(1.0, out.gauge_phases[idx]) * std::conj(c) / std::abs(c));
      transported = (prev.left.row(i) * out.right.col(i)).value().real() > 0.0;
    }
    if (!transported) {
      // Pivot lost or the pivot gauge flipped the vector: align with the previous
      // frame instead and restart the pivot gauge from here.
      const Complex o = (prev.left.row(i) * out.right.col(i)).value();
      if (std::abs(o) > 0.0) rephase(out, i, std::conj(o) / std::abs(o));
      const Eigen::Index q = largest_component(out.right.col(i));
      out.gauge_pivots[idx] = q;
      out.gauge_phases[idx] = std::arg(out.right(q, i));
    }
  }
  out.left = out.right.partialPivLu().inverse();
  return out;
}

Matrix reconstruct(const BiorthogonalFrame& frame) {
  return frame.right * frame.energies.asDiagonal() * frame.left;
}

double biorthonormality_residual(const BiorthogonalFrame& frame) {
  const Eigen::Index n = frame.size();
  return max_norm(frame.left * frame.right - Matrix::Identity(n, n));
}

double completeness_residual(const BiorthogonalFrame& frame) {
  const Eigen::Index n = frame.size();
  return max_norm(frame.right * frame.left - Matrix::Identity(n, n));
}

double eigen_residual(const BiorthogonalFrame& frame, const Matrix& h) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < frame.size(); ++k) {
    const Vector r = frame.right.col(k);
    const Eigen::RowVectorXcd l = frame.left.row(k);
    worst = std::max(worst, max_norm(h * r - frame.energies(k) * r));
    worst = std::max(worst, max_norm(l * h - frame.energies(k) * l));
  }
  return worst;
}

}  // namespace qhdyn
