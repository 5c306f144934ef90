#include "qhdyn/evolution.hpp"

#include <cmath>
#include <sstream>

#include "qhdyn/errors.hpp"

namespace qhdyn {

namespace {

constexpr double kBlowup = 1e150;

// Cumulative int E_n dt at every grid point, Simpson on each step using the
// midpoint frame.
std::vector<RealVector> phase_integrals(const DressingTrack& track) {
  const auto& frames = track.half_grid_frames();
  const Eigen::Index n = frames.front().size();
  for (const auto& f : frames) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (std::abs(f.energies(k).imag()) >= kRealityTolerance) {
        std::ostringstream msg;
        msg << "non-real energy E_" << k << " = " << f.energies(k) << " at t = " << f.t
            << "; the standard-space evolution is not unitary";
        throw ComplexSpectrumError(msg.str());
      }
    }
  }
  std::vector<RealVector> out;
  out.reserve(track.steps() + 1);
  RealVector acc = RealVector::Zero(n);
  out.push_back(acc);
  const double dt = track.dt();
  for (std::size_t k = 0; k < track.steps(); ++k) {
    const auto& a = frames[2 * k].energies;
    const auto& m = frames[2 * k + 1].energies;
    const auto& b = frames[2 * k + 2].energies;
    acc += (dt / 6.0) * (a.real() + 4.0 * m.real() + b.real());
    out.push_back(acc);
  }
  return out;
}

Matrix phase_matrix(const RealVector& phases) {
  Vector d(phases.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) d(k) = std::polar(1.0, -phases(k));
  return d.asDiagonal();
}

template <typename T>
T rk4(const T& x, const Matrix& g0, const Matrix& gm, const Matrix& g1, double dt) {
  const T k1 = -kI * (g0 * x);
  const T k2 = -kI * (gm * (x + (0.5 * dt) * k1));
  const T k3 = -kI * (gm * (x + (0.5 * dt) * k2));
  const T k4 = -kI * (g1 * (x + dt * k3));
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <typename T>
void guard_finite(const T& x, double t) {
  if (!x.allFinite() || (x.size() > 0 && x.cwiseAbs().maxCoeff() > kBlowup)) {
    std::ostringstream msg;
    msg << "integration blew up near t = " << t
        << " (exceptional point crossing or metric degeneration)";
    throw IntegrationError(msg.str());
  }
}

}  // namespace

std::vector<Matrix> standard_propagators(const DressingTrack& track) {
  std::vector<Matrix> out;
  for (const auto& phases : phase_integrals(track)) out.push_back(phase_matrix(phases));
  return out;
}

Matrix propagate_standard(const DressingTrack& track, double t0, double t1) {
  const auto index_of = [&](double t) {
    const double x = (t - track.t0()) / track.dt();
    const long long k = std::llround(x);
    if (k < 0 || k > static_cast<long long>(track.steps()) || std::abs(x - static_cast<double>(k)) > 1e-7) {
      throw ConfigError("propagate_standard: times must be grid points of the track");
    }
    return static_cast<std::size_t>(k);
  };
  const std::size_t a = index_of(t0);
  const std::size_t b = index_of(t1);
  const auto integrals = phase_integrals(track);
  return phase_matrix(integrals[b] - integrals[a]);
}

EvolutionState step_generator(const EvolutionState& state, const GeneratorSamples& generator, double dt,
                              Picture picture) {
  if (!(dt > 0.0)) throw ConfigError("step_generator: dt must be positive");
  EvolutionState next = state;
  next.t = state.t + dt;
  if (picture != Picture::kLeft) {
    next.phi_right = rk4<Vector>(state.phi_right, generator.start, generator.mid, generator.end, dt);
    guard_finite(next.phi_right, next.t);
  }
  if (picture != Picture::kRight) {
    next.phi_left = rk4<Vector>(state.phi_left, generator.start.adjoint(), generator.mid.adjoint(),
                                generator.end.adjoint(), dt);
    guard_finite(next.phi_left, next.t);
  }
  return next;
}

Matrix step_matrix(const Matrix& x, const Matrix& g_start, const Matrix& g_mid, const Matrix& g_end, double dt) {
  return rk4<Matrix>(x, g_start, g_mid, g_end, dt);
}

Trajectory propagate_quasi(const DressingTrack& track, const Vector& phi0, const PropagationOptions& options) {
  const Eigen::Index n = track.model().dimension;
  if (phi0.size() != n) throw ConfigError("initial state has the wrong dimension");
  if (!phi0.allFinite() || phi0.cwiseAbs().maxCoeff() == 0.0) {
    throw ConfigError("initial state must be a finite nonzero vector");
  }

  Trajectory out;
  out.picture = options.picture;
  out.generator = options.generator;
  out.has_propagators = options.propagators;
  out.samples.reserve(track.steps() + 1);

  const auto u_series = standard_propagators(track);

  const auto generator_at = [&](double, const DressingMap& d, const Matrix& h) -> Matrix {
    if (options.generator == GeneratorChoice::kHamiltonian) return h;
    return build_generator_with_inverse(h, d.omega_inv, d.omega_dot);
  };

  bool warned = false;
  const auto sample_at = [&](std::size_t k) {
    const double t = track.grid_time(k);
    TrajectorySample s;
    s.dressing = track.dressing(t, options.mode);
    if (!warned && s.dressing.metric.condition > kConditionWarning) {
      std::ostringstream msg;
      msg << "metric condition number " << s.dressing.metric.condition << " exceeds " << kConditionWarning
          << " at t = " << t;
      out.warnings.push_back(msg.str());
      warned = true;
    }
    s.hamiltonian = track.hamiltonian(t);
    s.generator = generator_at(t, s.dressing, s.hamiltonian);
    s.frame = track.half_grid_frames()[2 * k];
    s.energies = s.frame.energies;
    s.hermitized = s.dressing.omega * s.hamiltonian * s.dressing.omega_inv;
    s.state.t = t;
    s.propagators.t = t;
    s.propagators.u_std = u_series[k];
    return s;
  };

  TrajectorySample current = sample_at(0);
  {
    Vector phi = phi0;
    if (options.normalize) {
      const double norm = theta_inner(phi, phi, current.dressing.theta).real();
      phi /= std::sqrt(norm);
    }
    current.state.phi_right = options.picture == Picture::kLeft ? Vector() : phi;
    current.state.phi_left = options.picture == Picture::kRight ? Vector() : Vector(current.dressing.theta * phi);
    current.state.phi_standard = current.dressing.omega * phi;
    if (options.propagators) {
      current.propagators.u_right = Matrix::Identity(n, n);
      current.propagators.u_left_dag = Matrix::Identity(n, n);
    }
  }
  const Vector standard0 = current.state.phi_standard;

  const double dt = track.dt();
  for (std::size_t k = 0; k < track.steps(); ++k) {
    const double t_mid = track.t0() + 0.5 * static_cast<double>(2 * k + 1) * dt;
    const DressingMap mid = track.dressing(t_mid, options.mode);
    const Matrix h_mid = track.hamiltonian(t_mid);

    TrajectorySample next = sample_at(k + 1);
    const GeneratorSamples g{current.generator, generator_at(t_mid, mid, h_mid), next.generator};
    next.state = step_generator(current.state, g, dt, options.picture);
    next.state.t = next.dressing.t;
    next.state.phi_standard = next.propagators.u_std * standard0;
    if (options.propagators) {
      next.propagators.u_right = step_matrix(current.propagators.u_right, g.start, g.mid, g.end, dt);
      next.propagators.u_left_dag = step_matrix(current.propagators.u_left_dag, g.start.adjoint(),
                                                g.mid.adjoint(), g.end.adjoint(), dt);
      guard_finite(next.propagators.u_right, next.state.t);
      guard_finite(next.propagators.u_left_dag, next.state.t);
    }
    out.samples.push_back(std::move(current));
    current = std::move(next);
  }
  out.samples.push_back(std::move(current));
  return out;
}

Complex expectation(const EvolutionState& state, const Matrix& a, const Matrix& theta) {
  const Complex norm = theta_inner(state.phi_right, state.phi_right, theta);
  if (!(std::abs(norm) > 0.0)) throw NumericalError("expectation: state has zero metric norm");
  return theta_inner(state.phi_right, a * state.phi_right, theta) / norm;
}

}  // namespace qhdyn
