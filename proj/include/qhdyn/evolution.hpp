#pragma once

#include <string>
#include <vector>

#include "qhdyn/dressing.hpp"
#include "qhdyn/types.hpp"

namespace qhdyn {

/// Right ket |Phi>, left ket |Phi>> and standard-space ket |phi> at time t.
struct EvolutionState {
  double t = 0.0;
  Vector phi_right;
  Vector phi_left;
  Vector phi_standard;
};

/// u(t) together with U_R(t) and U_L^+(t), the propagators of |Phi> and |Phi>>,
/// integrated from their own equations.
struct PropagatorPair {
  double t = 0.0;
  Matrix u_std;
  Matrix u_right;
  Matrix u_left_dag;
};

enum class Picture { kRight, kLeft, kBoth };

/// Which operator drives the quasi-Hermitian kets. kHamiltonian deliberately
/// drops the -i Omega^-1 dOmega/dt correction; it exists only to show that H
/// alone does not preserve the metric norm.
enum class GeneratorChoice { kGenerator, kHamiltonian };

/// Generator samples at the three RK4 abscissae t, t + dt/2, t + dt.
struct GeneratorSamples {
  Matrix start;
  Matrix mid;
  Matrix end;
};

/// Closed-form standard-space propagator diag(exp(-i int_t0^t1 E_n)) with the
/// integral taken by composite Simpson on the half-step frames of `track`.
/// `t0` and `t1` must be grid points. Throws ComplexSpectrumError on non-real E_n.
Matrix propagate_standard(const DressingTrack& track, double t0, double t1);

/// u(t_k) for every grid point, from t0().
std::vector<Matrix> standard_propagators(const DressingTrack& track);

/// One classical RK4 step: i d|Phi>/dt = H_gen |Phi> and i d|Phi>>/dt = H_gen^+ |Phi>>.
/// phi_standard is left untouched. Throws IntegrationError on non-finite results.
EvolutionState step_generator(const EvolutionState& state, const GeneratorSamples& generator, double dt,
                              Picture picture = Picture::kBoth);

/// RK4 step for a matrix solution of i dX/dt = G X.
Matrix step_matrix(const Matrix& x, const Matrix& g_start, const Matrix& g_mid, const Matrix& g_end, double dt);

struct TrajectorySample {
  EvolutionState state;
  BiorthogonalFrame frame;
  Vector energies;
  Matrix hamiltonian;
  Matrix generator;
  Matrix hermitized;
  DressingMap dressing;
  PropagatorPair propagators;
};

struct Trajectory {
  Picture picture = Picture::kBoth;
  GeneratorChoice generator = GeneratorChoice::kGenerator;
  bool has_propagators = false;
  std::vector<TrajectorySample> samples;
  std::vector<std::string> warnings;

  const TrajectorySample& initial() const { return samples.front(); }
  const TrajectorySample& final() const { return samples.back(); }
};

struct PropagationOptions {
  Picture picture = Picture::kBoth;
  GeneratorChoice generator = GeneratorChoice::kGenerator;
  OmegaDotMode mode = OmegaDotMode::kFiniteDifference;
  /// Also integrate U_R and U_L^+ as matrices.
  bool propagators = true;
  /// Rescale the initial ket to unit metric norm <<Phi(0)|Phi(0)> = 1.
  bool normalize = true;
};

/// Integrates the right and/or left quasi-Hermitian equations over the whole
/// grid of `track`, starting from |Phi(0)> = phi0 and |Phi(0)>> = Theta(0)|Phi(0)>.
/// Each sample stores what the verify checks need.
Trajectory propagate_quasi(const DressingTrack& track, const Vector& phi0, const PropagationOptions& options);

/// <Phi|Theta A|Phi> / <Phi|Theta|Phi>. Throws NumericalError on a zero-norm state.
Complex expectation(const EvolutionState& state, const Matrix& a, const Matrix& theta);

}  // namespace qhdyn
