#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qhdyn/model.hpp"
#include "qhdyn/schedule.hpp"
#include "qhdyn/spectral.hpp"
#include "qhdyn/types.hpp"

namespace qhdyn {

inline constexpr double kConditionWarning = 1e8;
inline constexpr double kConditionLimit = 1e12;

enum class OmegaDotMode { kAnalyticMuOnly, kFiniteDifference };
enum class OmegaDotSource { kAnalytic, kFiniteDifference };

struct MetricSpectrum {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double condition = 0.0;
};

/// Omega(t) and everything derived from it at one instant.
struct DressingMap {
  double t = 0.0;
  Matrix omega;
  Matrix omega_inv;
  Matrix omega_dot;
  Matrix theta;
  MetricSpectrum metric;
  OmegaDotSource theta_source = OmegaDotSource::kAnalytic;
};

/// Omega = sum_n e_n mu_n <<n|; row n is mu_n <<n|. Throws SingularMapError on a zero mu_n.
Matrix build_omega(const BiorthogonalFrame& frame, std::span<const Complex> mu);

/// Theta = Omega^+ Omega, symmetrized. Throws ConditioningError unless positive definite.
Matrix build_theta(const Matrix& omega);

/// Theta assembled directly from the frame: sum_n |mu_n|^2 (<<n|)^+ <<n|.
Matrix theta_from_frame(const BiorthogonalFrame& frame, std::span<const Complex> mu);

MetricSpectrum metric_spectrum(const Matrix& theta);

/// Throws ConditioningError when the metric is not positive or cond > kConditionLimit.
/// Returns true when cond > kConditionWarning.
bool guard_metric(const MetricSpectrum& spectrum, double t);

/// h = Omega H Omega^-1.
Matrix hermitize(const Matrix& omega, const Matrix& h);

/// ||A^+ Theta - Theta A||_max.
double quasi_hermiticity_residual(const Matrix& a, const Matrix& theta);

/// H_gen = H - i Omega^-1 dOmega/dt.
Matrix build_generator(const Matrix& h, const Matrix& omega, const Matrix& omega_dot);
Matrix build_generator_with_inverse(const Matrix& h, const Matrix& omega_inv, const Matrix& omega_dot);

/// <a|Theta|b>.
Complex theta_inner(const Vector& a, const Vector& b, const Matrix& theta);

/// Fourth-order finite-difference derivative of f at t with step h. Uses the
/// central stencil when [t - 2h, t + 2h] fits in [lo, hi], otherwise the
/// one-sided fourth-order stencil that stays inside.
Matrix fd_derivative(const std::function<Matrix(double)>& f, double t, double h, double lo, double hi);

/// Continuity-tracked frames on a uniform half-step grid plus the dressing
/// coefficients, able to evaluate Omega, dOmega/dt and the full DressingMap at
/// any t in [t0, t1].
///
/// Frames at half-grid points are precomputed sequentially; other instants are
/// solved on demand and aligned with the nearest stored frame.
class DressingTrack {
 public:
  struct Options {
    RealityPolicy reality = RealityPolicy::kAssert;
    /// Finite-difference step; defaults to the grid step dt.
    std::optional<double> fd_step;
  };

  DressingTrack(HamiltonianModel model, std::vector<Schedule> mu, double t0, double t1, double dt,
                Options options);
  DressingTrack(HamiltonianModel model, std::vector<Schedule> mu, double t0, double t1, double dt);

  const HamiltonianModel& model() const { return model_; }
  const std::vector<Schedule>& mu_schedules() const { return mu_; }
  double t0() const { return t0_; }
  double t1() const { return t1_; }
  double dt() const { return dt_; }
  double fd_step() const { return fd_step_; }
  std::size_t steps() const { return steps_; }
  double grid_time(std::size_t k) const;

  /// Frames at t0 + j*dt/2, j = 0..2*steps.
  const std::vector<BiorthogonalFrame>& half_grid_frames() const { return frames_; }

  Matrix hamiltonian(double t) const;
  BiorthogonalFrame frame(double t) const;
  std::vector<Complex> mu(double t) const;
  std::vector<Complex> mu_derivative(double t) const;
  Matrix omega(double t) const;
  Matrix omega_dot(double t, OmegaDotMode mode) const;
  /// Uses analytic mu-only derivatives when H is static, finite differences otherwise.
  OmegaDotMode default_mode() const;
  DressingMap dressing(double t, OmegaDotMode mode) const;

 private:
  std::optional<std::size_t> half_index(double t) const;

  HamiltonianModel model_;
  std::vector<Schedule> mu_;
  double t0_;
  double t1_;
  double dt_;
  std::size_t steps_;
  double fd_step_;
  Options options_;
  std::vector<BiorthogonalFrame> frames_;
};

/// Free-function form of DressingTrack::omega_dot.
Matrix omega_dot(const DressingTrack& track, double t, OmegaDotMode mode);

/// Realizes an observable at time t. Quasi-Hermiticity is not assumed; callers
/// check it with quasi_hermiticity_residual.
Matrix realize_observable(const ObservableSpec& spec, const Matrix& h, const BiorthogonalFrame& frame,
                          const Matrix& theta, double t);

}  // namespace qhdyn
