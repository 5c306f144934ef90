#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qhdyn/schedule.hpp"
#include "qhdyn/types.hpp"

namespace qhdyn {

enum class Family {
  kTriangular2,     ///< [[e1, c], [0, e2]]
  kPT2,             ///< [[i gamma, s], [s, -i gamma]]
  kSimilarityRand,  ///< S diag(e1..eN) S^-1 with a seeded random S
  kCubicTrunc,      ///< p^2 + i g x^3 truncated to N oscillator levels
};

std::string_view to_string(Family family);
Family family_from_string(std::string_view name);

enum class ObservableSource { kHamiltonian, kUserMatrix, kFunctionOfFrame };

/// Construction rules for observables derived from the current frame and metric.
enum class FrameRule {
  kMetricSeed,       ///< A(t) = scale(t) * Theta^-1(t) * K, K Hermitian
  kSpectralWeights,  ///< A(t) = scale(t) * sum_n w_n |n><<n|, w_n real
};

std::string_view to_string(ObservableSource source);
ObservableSource observable_source_from_string(std::string_view name);
std::string_view to_string(FrameRule rule);
FrameRule frame_rule_from_string(std::string_view name);

struct ObservableSpec {
  std::string name;
  ObservableSource source = ObservableSource::kHamiltonian;
  FrameRule rule = FrameRule::kMetricSeed;
  /// User matrix, or the Hermitian seed K for kMetricSeed.
  Matrix data;
  /// Real weights for kSpectralWeights.
  std::vector<double> weights;
  /// Extra scalar time dependence for function-of-frame observables.
  Schedule scale = Schedule::constant(1.0);
};

/// A parametrized Hamiltonian family. Construct through make_model(), which
/// validates and precomputes the fixed matrices some families need.
struct HamiltonianModel {
  int dimension = 2;
  Family family = Family::kTriangular2;
  std::map<std::string, Complex> params;
  /// Time-varying parameters. A scheduled parameter ignores its `params` value.
  std::map<std::string, Schedule> schedules;
  std::vector<ObservableSpec> observables;
  std::uint64_t seed = 0;

  // Filled by make_model().
  Matrix similarity;          ///< similarity-rand: S
  Matrix similarity_inverse;  ///< similarity-rand: S^-1
  Matrix kinetic;             ///< cubic-trunc: truncated p^2
  Matrix cubic;               ///< cubic-trunc: truncated x^3

  Complex parameter(const std::string& name, double t) const;
  bool is_time_dependent() const;
};

/// Validates invariants (N >= 2, required parameters present, schedules refer
/// to known parameters, family constraints at `t_ref`) and precomputes fixed
/// matrices. Throws ConfigError.
HamiltonianModel make_model(HamiltonianModel model, double t_ref = 0.0);

/// H(t) for the model's family.
Matrix build_hamiltonian(const HamiltonianModel& model, double t);

/// Seeded random similarity transform with condition number below `max_condition`,
/// obtained by resampling.
Matrix random_similarity(int dimension, std::uint64_t seed, double max_condition = 1e3);

/// Truncated p^2 and x^3 in the harmonic-oscillator basis, x = (a + a^+)/sqrt2,
/// p = i(a^+ - a)/sqrt2. Products are formed in an enlarged basis before
/// truncation so every retained matrix element is exact.
Matrix oscillator_kinetic(int dimension);
Matrix oscillator_cubic(int dimension);

}  // namespace qhdyn
