#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qhdyn/errors.hpp"
#include "qhdyn/evolution.hpp"
#include "qhdyn/verify.hpp"
#include "test_util.hpp"

namespace qhdyn {
namespace {

using testing::mat2;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

HamiltonianModel triangular(double c) {
  HamiltonianModel m;
  m.family = Family::kTriangular2;
  m.params = {{"e1", 1.0}, {"e2", 2.0}, {"c", c}};
  return make_model(m);
}

HamiltonianModel pt2(double gamma, std::optional<Schedule> s_schedule = std::nullopt) {
  HamiltonianModel m;
  m.family = Family::kPT2;
  m.params = {{"gamma", gamma}, {"s", 1.0}};
  if (s_schedule) m.schedules["s"] = *s_schedule;
  return make_model(m);
}

Vector vec2(Complex a, Complex b) {
  Vector v(2);
  v << a, b;
  return v;
}

std::vector<Schedule> unit_mu(int n) { return std::vector<Schedule>(n, Schedule::constant(1.0)); }

TEST(Evolution, StandardPropagatorClosedForm) {
  const double pi = std::numbers::pi;
  const DressingTrack track(triangular(0.0), unit_mu(2), 0.0, pi, pi / 1000.0);
  EXPECT_LT(max_abs(propagate_standard(track, 0.0, pi) - mat2(-1.0, 0.0, 0.0, 1.0)), 1e-12);
  EXPECT_LT(max_abs(propagate_standard(track, 0.0, 0.0) - Matrix::Identity(2, 2)), 1e-15);
  for (const auto& u : standard_propagators(track))
    EXPECT_LT(max_abs(u.adjoint() * u - Matrix::Identity(2, 2)), 1e-12);
}

TEST(Evolution, StandardPropagatorRejectsComplexSpectrum) {
  DressingTrack::Options options;
  options.reality = RealityPolicy::kReport;
  HamiltonianModel m;
  m.family = Family::kCubicTrunc;
  m.dimension = 6;
  m.params = {{"g", 1.0}};
  const DressingTrack track(make_model(m), unit_mu(6), 0.0, 0.1, 1e-2, options);
  EXPECT_THROW(propagate_standard(track, 0.0, 0.1), ComplexSpectrumError);
}

TEST(Evolution, ZeroGeneratorLeavesStateUnchanged) {
  EvolutionState s;
  s.phi_right = vec2(Complex(0.3, 0.1), -2.0);
  s.phi_left = vec2(1.0, Complex(0.0, 4.0));
  s.phi_standard = vec2(1.0, 0.0);
  const Matrix zero = Matrix::Zero(2, 2);
  const auto next = step_generator(s, {zero, zero, zero}, 0.1);
  EXPECT_EQ(next.phi_right, s.phi_right);
  EXPECT_EQ(next.phi_left, s.phi_left);
  EXPECT_DOUBLE_EQ(next.t, 0.1);
}

TEST(Evolution, NonFiniteStepRaises) {
  EvolutionState s;
  s.phi_right = vec2(1.0, 0.0);
  s.phi_left = vec2(1.0, 0.0);
  const Matrix bad = mat2(std::numeric_limits<double>::infinity(), 0.0, 0.0, 1.0);
  EXPECT_THROW(step_generator(s, {bad, bad, bad}, 0.1), IntegrationError);
}

TEST(Evolution, ConstantNonHermitianGeneratorClosedForm) {
  const DressingTrack track(triangular(0.0), {Schedule::exponential(1.0, 0.3), Schedule::exponential(1.0, -0.1)}, 0.0,
                            1.0, 1e-3);
  PropagationOptions options;
  options.mode = OmegaDotMode::kAnalyticMuOnly;
  const auto traj = propagate_quasi(track, vec2(1.0, 1.0), options);
  const Vector phi0 = traj.initial().state.phi_right;
  const Complex g1(1.0, -0.3);
  const Complex g2(2.0, 0.1);
  for (const auto& sample : traj.samples) {
    const double t = sample.state.t;
    const Vector expected = vec2(std::exp(-kI * g1 * t) * phi0(0), std::exp(-kI * g2 * t) * phi0(1));
    ASSERT_LT((sample.state.phi_right - expected).cwiseAbs().maxCoeff(), 1e-10) << t;
  }
  // Euclidean norm drifts while the metric norm is conserved.
  EXPECT_GT(std::abs(traj.final().state.phi_right.norm() - phi0.norm()), 0.05);
  EXPECT_LT(check_norm_conservation(traj).max_residual, 1e-10);
}

TEST(Evolution, StaticDressingReproducesTextbookEvolution) {
  const DressingTrack track(pt2(0.5), unit_mu(2), 0.0, 2.0, 1e-3);
  PropagationOptions options;
  options.mode = track.default_mode();
  const auto traj = propagate_quasi(track, vec2(1.0, Complex(0.5, 0.5)), options);
  const auto& f = traj.initial().frame;
  const Vector phi0 = traj.initial().state.phi_right;
  for (const auto& sample : traj.samples) {
    EXPECT_LT(max_abs(sample.generator - sample.hamiltonian), 1e-14);
    Vector phases(2);
    for (int n = 0; n < 2; ++n) phases(n) = std::exp(-kI * f.energies(n) * sample.state.t);
    const Vector expected = f.right * phases.asDiagonal() * f.left * phi0;
    ASSERT_LT((sample.state.phi_right - expected).cwiseAbs().maxCoeff(), 1e-10) << sample.state.t;
  }
}

TEST(Evolution, EigenstateOnlyAcquiresPhase) {
  const DressingTrack track(triangular(1.0), unit_mu(2), 0.0, 1.0, 1e-3);
  const auto& f = track.half_grid_frames().front();
  const Vector ket = f.right.col(1);
  PropagationOptions options;
  options.mode = track.default_mode();
  options.normalize = false;
  const auto traj = propagate_quasi(track, ket, options);
  for (const auto& sample : traj.samples) {
    const Vector expected = std::exp(-2.0 * kI * sample.state.t) * ket;
    ASSERT_LT((sample.state.phi_right - expected).cwiseAbs().maxCoeff(), 1e-11);
  }
  EXPECT_LT(check_norm_conservation(traj).max_residual, 1e-12);
}

TEST(Evolution, HermitianLimitMatchesPlainIntegration) {
  const DressingTrack track(pt2(0.0, Schedule::sinusoidal(1.0, 0.4, 3.0)), unit_mu(2), 0.0, 1.0, 1e-3);
  PropagationOptions options;
  const Vector phi0 = vec2(0.6, Complex(0.0, 0.8));
  const auto traj = propagate_quasi(track, phi0, options);
  Vector psi = phi0;
  const double dt = track.dt();
  for (std::size_t k = 0; k < track.steps(); ++k) {
    const double t = track.grid_time(k);
    const Matrix h0 = track.hamiltonian(t);
    const Matrix h1 = track.hamiltonian(t + 0.5 * dt);
    const Matrix h2 = track.hamiltonian(t + dt);
    const Vector k1 = -kI * (h0 * psi);
    const Vector k2 = -kI * (h1 * (psi + 0.5 * dt * k1));
    const Vector k3 = -kI * (h1 * (psi + 0.5 * dt * k2));
    const Vector k4 = -kI * (h2 * (psi + dt * k3));
    psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  EXPECT_LT(max_abs(traj.final().dressing.theta - Matrix::Identity(2, 2)), 1e-10);
  EXPECT_LT((traj.final().state.phi_right - psi).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((traj.final().state.phi_left - psi).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Evolution, DrivenDressingStaysEquivalent) {
  const DressingTrack track(triangular(0.8),
                            {Schedule::exponential(1.0, 0.4), Schedule::sinusoidal(Complex(0.0, 1.0), 0.3, 4.0)}, 0.0,
                            1.0, 1e-3);
  PropagationOptions options;
  const auto traj = propagate_quasi(track, vec2(1.0, -1.0), options);
  EXPECT_LT(check_norm_conservation(traj).max_residual, 1e-8);
  EXPECT_LT(check_equivalence(traj).max_residual, 1e-7);
  EXPECT_LT(check_left_right_duality(traj).max_residual, 1e-7);
  EXPECT_LT(check_intertwining(traj).max_residual, 1e-7);
  EXPECT_LT(check_propagator_right(traj).max_residual, 1e-8);
}

TEST(Evolution, DroppingTheCorrectionBreaksNormConservation) {
  const DressingTrack track(triangular(0.8), {Schedule::exponential(1.0, 0.4), Schedule::exponential(1.0, -0.2)},
                            0.0, 1.0, 1e-3);
  PropagationOptions options;
  options.mode = track.default_mode();
  options.generator = GeneratorChoice::kHamiltonian;
  const auto traj = propagate_quasi(track, vec2(1.0, 1.0), options);
  EXPECT_GT(check_norm_conservation(traj).max_residual, 1e-3);
}

TEST(Evolution, Expectation) {
  EvolutionState s;
  s.phi_right = vec2(1.0, 1.0);
  const Matrix theta = mat2(1.0, -1.0, -1.0, 2.0);
  EXPECT_NEAR(std::abs(expectation(s, mat2(1.0, 1.0, 0.0, 2.0), theta) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(expectation(s, Matrix::Identity(2, 2), theta) - 1.0), 0.0, 1e-15);
  s.phi_right = Vector::Zero(2);
  EXPECT_THROW(expectation(s, Matrix::Identity(2, 2), theta), NumericalError);
}

}  // namespace
}  // namespace qhdyn
