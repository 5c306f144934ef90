#include "qhdyn/dressing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "qhdyn/errors.hpp"

namespace qhdyn {

Matrix build_omega(const BiorthogonalFrame& frame, std::span<const Complex> mu) {
  const Eigen::Index n = frame.size();
  if (static_cast<Eigen::Index>(mu.size()) != n) {
    throw ConfigError("build_omega: expected " + std::to_string(n) + " dressing coefficients, got " +
                      std::to_string(mu.size()));
  }
  Matrix omega(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex m = mu[static_cast<std::size_t>(k)];
    if (m == Complex{}) throw SingularMapError("build_omega: mu_" + std::to_string(k) + " is zero");
    omega.row(k) = m * frame.left.row(k);
  }
  return omega;
}

Matrix build_theta(const Matrix& omega) {
  Matrix theta = omega.adjoint() * omega;
  theta = 0.5 * (theta + theta.adjoint()).eval();
  const MetricSpectrum spectrum = metric_spectrum(theta);
  if (!(spectrum.min_eigenvalue > 0.0)) {
    std::ostringstream msg;
    msg << "metric is not positive definite (smallest eigenvalue " << spectrum.min_eigenvalue << ")";
    throw ConditioningError(msg.str());
  }
  return theta;
}

Matrix theta_from_frame(const BiorthogonalFrame& frame, std::span<const Complex> mu) {
  const Eigen::Index n = frame.size();
  Matrix theta = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::RowVectorXcd bra = frame.left.row(k);
    theta += std::norm(mu[static_cast<std::size_t>(k)]) * (bra.adjoint() * bra);
  }
  return theta;
}

MetricSpectrum metric_spectrum(const Matrix& theta) {
  const Eigen::SelfAdjointEigenSolver<Matrix> solver(theta, Eigen::EigenvaluesOnly);
  MetricSpectrum out;
  out.min_eigenvalue = solver.eigenvalues().minCoeff();
  out.max_eigenvalue = solver.eigenvalues().maxCoeff();
  out.condition = out.min_eigenvalue > 0.0 ? out.max_eigenvalue / out.min_eigenvalue
                                           : std::numeric_limits<double>::infinity();
  return out;
}

bool guard_metric(const MetricSpectrum& spectrum, double t) {
  if (!(spectrum.min_eigenvalue > 0.0) || !(spectrum.condition <= kConditionLimit)) {
    std::ostringstream msg;
    msg << "metric conditioning lost at t = " << t << ": cond = " << spectrum.condition
        << ", smallest eigenvalue = " << spectrum.min_eigenvalue << " (limit " << kConditionLimit << ")";
    throw ConditioningError(msg.str());
  }
  return spectrum.condition > kConditionWarning;
}

Matrix hermitize(const Matrix& omega, const Matrix& h) {
  return omega * h * omega.partialPivLu().inverse();
}

double quasi_hermiticity_residual(const Matrix& a, const Matrix& theta) {
  return max_norm(a.adjoint() * theta - theta * a);
}

Matrix build_generator(const Matrix& h, const Matrix& omega, const Matrix& omega_dot) {
  return build_generator_with_inverse(h, omega.partialPivLu().inverse(), omega_dot);
}

Matrix build_generator_with_inverse(const Matrix& h, const Matrix& omega_inv, const Matrix& omega_dot) {
  return h - kI * (omega_inv * omega_dot);
}

Complex theta_inner(const Vector& a, const Vector& b, const Matrix& theta) {
  if (a.size() != b.size() || theta.rows() != a.size() || theta.cols() != b.size()) {
    throw ConfigError("theta_inner: dimension mismatch");
  }
  return a.dot(theta * b);
}

Matrix fd_derivative(const std::function<Matrix(double)>& f, double t, double h, double lo, double hi) {
  const double slack = 1e-9 * h;
  if (t - 2.0 * h >= lo - slack && t + 2.0 * h <= hi + slack) {
    return (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h);
  }
  const double sign = (t - lo <= hi - t) ? 1.0 : -1.0;
  const double step = sign * h;
  return (-25.0 * f(t) + 48.0 * f(t + step) - 36.0 * f(t + 2.0 * step) + 16.0 * f(t + 3.0 * step) -
          3.0 * f(t + 4.0 * step)) /
         (12.0 * step);
}

DressingTrack::DressingTrack(HamiltonianModel model, std::vector<Schedule> mu, double t0, double t1, double dt)
    : DressingTrack(std::move(model), std::move(mu), t0, t1, dt, Options{}) {}

DressingTrack::DressingTrack(HamiltonianModel model, std::vector<Schedule> mu, double t0, double t1, double dt,
                             Options options)
    : model_(std::move(model)), mu_(std::move(mu)), t0_(t0), t1_(t1), dt_(dt), options_(options) {
  if (!(dt_ > 0.0)) throw ConfigError("time.dt must be positive");
  if (!(t1_ > t0_)) throw ConfigError("time.t1 must exceed time.t0");
  if (static_cast<int>(mu_.size()) != model_.dimension) {
    throw ConfigError("mu list length " + std::to_string(mu_.size()) + " does not match model dimension " +
                      std::to_string(model_.dimension));
  }
  const double ratio = (t1_ - t0_) / dt_;
  steps_ = static_cast<std::size_t>(std::llround(ratio));
  if (steps_ == 0 || std::abs(ratio - static_cast<double>(steps_)) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigError("(t1 - t0) / dt must be a whole number of steps");
  }
  fd_step_ = options_.fd_step.value_or(dt_);

  frames_.reserve(2 * steps_ + 1);
  for (std::size_t j = 0; j <= 2 * steps_; ++j) {
    const double t = t0_ + 0.5 * static_cast<double>(j) * dt_;
    BiorthogonalFrame f = eig_biorthogonal(hamiltonian(t), options_.reality, t);
    frames_.push_back(j == 0 ? std::move(f) : track_continuity(frames_.back(), f));
  }
}

double DressingTrack::grid_time(std::size_t k) const { return t0_ + static_cast<double>(k) * dt_; }

std::optional<std::size_t> DressingTrack::half_index(double t) const {
  const double x = (t - t0_) / (0.5 * dt_);
  const long long j = std::llround(x);
  if (j < 0 || j > static_cast<long long>(2 * steps_)) return std::nullopt;
  if (std::abs(x - static_cast<double>(j)) > 1e-7) return std::nullopt;
  return static_cast<std::size_t>(j);
}

Matrix DressingTrack::hamiltonian(double t) const { return build_hamiltonian(model_, t); }

BiorthogonalFrame DressingTrack::frame(double t) const {
  if (auto j = half_index(t)) return frames_[*j];
  const double x = std::clamp((t - t0_) / (0.5 * dt_), 0.0, static_cast<double>(2 * steps_));
  const auto nearest = static_cast<std::size_t>(std::llround(x));
  const BiorthogonalFrame f = eig_biorthogonal(hamiltonian(t), options_.reality, t);
  return track_continuity(frames_[nearest], f);
}

std::vector<Complex> DressingTrack::mu(double t) const {
  std::vector<Complex> out;
  out.reserve(mu_.size());
  for (const auto& s : mu_) out.push_back(eval_schedule(s, t));
  return out;
}

std::vector<Complex> DressingTrack::mu_derivative(double t) const {
  std::vector<Complex> out;
  out.reserve(mu_.size());
  for (const auto& s : mu_) out.push_back(eval_schedule_derivative(s, t));
  return out;
}

Matrix DressingTrack::omega(double t) const {
  const auto m = mu(t);
  return build_omega(frame(t), m);
}

OmegaDotMode DressingTrack::default_mode() const {
  return model_.is_time_dependent() ? OmegaDotMode::kFiniteDifference : OmegaDotMode::kAnalyticMuOnly;
}

Matrix DressingTrack::omega_dot(double t, OmegaDotMode mode) const {
  if (mode == OmegaDotMode::kAnalyticMuOnly) {
    if (model_.is_time_dependent()) {
      throw InconsistentModeError(
          "analytic-mu-only derivative requested but the Hamiltonian carries a time-dependent schedule");
    }
    const BiorthogonalFrame f = frame(t);
    const auto d = mu_derivative(t);
    Matrix out(f.size(), f.size());
    for (Eigen::Index k = 0; k < f.size(); ++k) out.row(k) = d[static_cast<std::size_t>(k)] * f.left.row(k);
    return out;
  }
  return fd_derivative([this](double s) { return omega(s); }, t, fd_step_, t0_, t1_);
}

DressingMap DressingTrack::dressing(double t, OmegaDotMode mode) const {
  DressingMap d;
  d.t = t;
  d.omega = omega(t);
  d.omega_inv = d.omega.partialPivLu().inverse();
  d.omega_dot = omega_dot(t, mode);
  d.theta = build_theta(d.omega);
  d.metric = metric_spectrum(d.theta);
  guard_metric(d.metric, t);
  d.theta_source =
      mode == OmegaDotMode::kAnalyticMuOnly ? OmegaDotSource::kAnalytic : OmegaDotSource::kFiniteDifference;
  return d;
}

Matrix omega_dot(const DressingTrack& track, double t, OmegaDotMode mode) { return track.omega_dot(t, mode); }

Matrix realize_observable(const ObservableSpec& spec, const Matrix& h, const BiorthogonalFrame& frame,
                          const Matrix& theta, double t) {
  switch (spec.source) {
    case ObservableSource::kHamiltonian: return h;
    case ObservableSource::kUserMatrix: return spec.data;
    case ObservableSource::kFunctionOfFrame: {
      const Complex scale = eval_schedule(spec.scale, t);
      if (spec.rule == FrameRule::kMetricSeed) {
        return scale * theta.llt().solve(spec.data);
      }
      RealVector w = Eigen::Map<const RealVector>(spec.weights.data(), static_cast<Eigen::Index>(spec.weights.size()));
      return scale * (frame.right * w.cast<Complex>().asDiagonal() * frame.left);
    }
  }
  throw ConfigError("unknown observable source");
}

}  // namespace qhdyn
