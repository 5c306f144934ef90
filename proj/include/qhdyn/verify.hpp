#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qhdyn/evolution.hpp"
#include "qhdyn/model.hpp"

namespace qhdyn {

struct InvariantReport {
  std::string name;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::vector<std::pair<double, double>> per_time_series;
};

/// Builds a report from a residual series; passed iff max < threshold.
InvariantReport make_report(std::string name, double threshold, std::vector<std::pair<double, double>> series);

namespace checks {
inline constexpr const char* kThetaNorm = "theta-norm-conservation";
inline constexpr const char* kLeftRightNorm = "left-right-norm-conservation";
inline constexpr const char* kEquivalence = "equivalence";
inline constexpr const char* kStandardUnitarity = "standard-unitarity";
inline constexpr const char* kObservableReality = "observable-reality";
inline constexpr const char* kObservableQuasiHermiticity = "observable-quasi-hermiticity";
inline constexpr const char* kQuasiHermiticity = "quasi-hermiticity";
inline constexpr const char* kIsospectrality = "isospectrality";
inline constexpr const char* kHermitizedHermiticity = "hermitized-hermiticity";
inline constexpr const char* kLeftRightDuality = "left-right-duality";
inline constexpr const char* kPropagatorRight = "propagator-right";
inline constexpr const char* kPropagatorLeft = "propagator-left";
inline constexpr const char* kIntertwining = "propagator-intertwining";
inline constexpr const char* kSpectrumReality = "spectrum-reality";
}  // namespace checks

/// Every check name with its default threshold.
const std::map<std::string, double>& default_thresholds();

InvariantReport check_norm_conservation(const Trajectory& trajectory,
                                        double threshold = 1e-8);
InvariantReport check_left_right_norm_conservation(const Trajectory& trajectory, double threshold = 1e-8);
InvariantReport check_equivalence(const Trajectory& trajectory, double threshold = 1e-7);
InvariantReport check_standard_unitarity(const Trajectory& trajectory, double threshold = 1e-10);
InvariantReport check_standard_unitarity(const std::vector<std::pair<double, Matrix>>& u_series,
                                         double threshold = 1e-10);
/// Observables are realized at every sample; each must pass quasi-Hermiticity
/// for its mean value to count.
InvariantReport check_observable_reality(const Trajectory& trajectory, const std::vector<ObservableSpec>& observables,
                                         double threshold = 1e-9);
InvariantReport check_observable_quasi_hermiticity(const Trajectory& trajectory,
                                                   const std::vector<ObservableSpec>& observables,
                                                   double threshold = 1e-9);
InvariantReport check_quasi_hermiticity(const Trajectory& trajectory, double threshold = 1e-9);
InvariantReport check_isospectrality(const Trajectory& trajectory, double threshold = 1e-9);
InvariantReport check_hermitized_hermiticity(const Trajectory& trajectory, double threshold = 1e-10);
InvariantReport check_left_right_duality(const Trajectory& trajectory, double threshold = 1e-7);
InvariantReport check_propagator_right(const Trajectory& trajectory, double threshold = 1e-8);
InvariantReport check_propagator_left(const Trajectory& trajectory, double threshold = 1e-8);
InvariantReport check_intertwining(const Trajectory& trajectory, double threshold = 1e-7);
InvariantReport check_spectrum_reality(const Trajectory& trajectory, double threshold = 1e-10);

/// Runs the named checks (all applicable ones when `names` is empty) with
/// optional threshold overrides. Checks that need a picture the trajectory does
/// not carry are skipped. Unknown names throw ConfigError.
std::vector<InvariantReport> run_checks(const Trajectory& trajectory, const std::vector<ObservableSpec>& observables,
                                        const std::vector<std::string>& names,
                                        const std::map<std::string, double>& overrides);

bool all_passed(const std::vector<InvariantReport>& reports);

/// Metric norm <Phi|Theta|Phi> of the right ket in a sample.
double theta_norm(const TrajectorySample& sample);
/// <<Phi|Phi> from the independently integrated left ket.
Complex left_right_norm(const TrajectorySample& sample);
/// ||Phi(t) - Omega^-1(t) u(t) Omega(0) Phi(0)||_max / ||Phi(0)||_max.
double equivalence_residual(const TrajectorySample& sample, const TrajectorySample& initial);
/// ||Theta Phi - |Phi>>||_max.
double duality_residual(const TrajectorySample& sample);
/// Largest mismatch between the sorted spectra of h and H.
double isospectrality_residual(const TrajectorySample& sample);

}  // namespace qhdyn
