#include "qhdyn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "qhdyn/errors.hpp"

namespace qhdyn {

InvariantReport make_report(std::string name, double threshold, std::vector<std::pair<double, double>> series) {
  InvariantReport r;
  r.name = std::move(name);
  r.threshold = threshold;
  for (const auto& [t, v] : series) {
    // NaN must never pass.
    if (std::isnan(v)) r.max_residual = std::numeric_limits<double>::infinity();
    r.max_residual = std::max(r.max_residual, v);
  }
  r.passed = r.max_residual < threshold;
  r.per_time_series = std::move(series);
  return r;
}

const std::map<std::string, double>& default_thresholds() {
  static const std::map<std::string, double> thresholds{
      {checks::kThetaNorm, 1e-8},
      {checks::kLeftRightNorm, 1e-8},
      {checks::kEquivalence, 1e-7},
      {checks::kStandardUnitarity, 1e-10},
      {checks::kObservableReality, 1e-9},
      {checks::kObservableQuasiHermiticity, 1e-9},
      {checks::kQuasiHermiticity, 1e-9},
      {checks::kIsospectrality, 1e-9},
      {checks::kHermitizedHermiticity, 1e-10},
      {checks::kLeftRightDuality, 1e-7},
      {checks::kPropagatorRight, 1e-8},
      {checks::kPropagatorLeft, 1e-8},
      {checks::kIntertwining, 1e-7},
      {checks::kSpectrumReality, 1e-10},
  };
  return thresholds;
}

double theta_norm(const TrajectorySample& sample) {
  return theta_inner(sample.state.phi_right, sample.state.phi_right, sample.dressing.theta).real();
}

Complex left_right_norm(const TrajectorySample& sample) {
  return sample.state.phi_left.dot(sample.state.phi_right);
}

double equivalence_residual(const TrajectorySample& sample, const TrajectorySample& initial) {
  const Vector oracle = sample.dressing.omega_inv * sample.state.phi_standard;
  return max_norm(sample.state.phi_right - oracle) / max_norm(initial.state.phi_right);
}

double duality_residual(const TrajectorySample& sample) {
  return max_norm(sample.dressing.theta * sample.state.phi_right - sample.state.phi_left);
}

namespace {

std::vector<Complex> sorted_spectrum(const Vector& values) {
  std::vector<Complex> v(values.data(), values.data() + values.size());
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return v;
}

using SampleResidual = std::function<double(const TrajectorySample&)>;

InvariantReport over_samples(const Trajectory& trajectory, const char* name, double threshold,
                             const SampleResidual& residual) {
  std::vector<std::pair<double, double>> series;
  series.reserve(trajectory.samples.size());
  for (const auto& s : trajectory.samples) series.emplace_back(s.state.t, residual(s));
  return make_report(name, threshold, std::move(series));
}

bool has_right(const Trajectory& t) { return t.picture != Picture::kLeft; }
bool has_left(const Trajectory& t) { return t.picture != Picture::kRight; }

}  // namespace

double isospectrality_residual(const TrajectorySample& sample) {
  const Eigen::ComplexEigenSolver<Matrix> solver(sample.hermitized, false);
  const auto a = sorted_spectrum(solver.eigenvalues());
  const auto b = sorted_spectrum(sample.energies);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

InvariantReport check_norm_conservation(const Trajectory& trajectory, double threshold) {
  const double reference = theta_norm(trajectory.initial());
  return over_samples(trajectory, checks::kThetaNorm, threshold,
                      [&](const TrajectorySample& s) { return std::abs(theta_norm(s) - reference); });
}

InvariantReport check_left_right_norm_conservation(const Trajectory& trajectory, double threshold) {
  const Complex reference = left_right_norm(trajectory.initial());
  return over_samples(trajectory, checks::kLeftRightNorm, threshold,
                      [&](const TrajectorySample& s) { return std::abs(left_right_norm(s) - reference); });
}

InvariantReport check_equivalence(const Trajectory& trajectory, double threshold) {
  const auto& initial = trajectory.initial();
  return over_samples(trajectory, checks::kEquivalence, threshold,
                      [&](const TrajectorySample& s) { return equivalence_residual(s, initial); });
}

InvariantReport check_standard_unitarity(const std::vector<std::pair<double, Matrix>>& u_series, double threshold) {
  std::vector<std::pair<double, double>> series;
  for (const auto& [t, u] : u_series) {
    series.emplace_back(t, max_norm(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())));
  }
  return make_report(checks::kStandardUnitarity, threshold, std::move(series));
}

InvariantReport check_standard_unitarity(const Trajectory& trajectory, double threshold) {
  std::vector<std::pair<double, Matrix>> u_series;
  for (const auto& s : trajectory.samples) u_series.emplace_back(s.state.t, s.propagators.u_std);
  return check_standard_unitarity(u_series, threshold);
}

InvariantReport check_observable_reality(const Trajectory& trajectory, const std::vector<ObservableSpec>& observables,
                                         double threshold) {
  return over_samples(trajectory, checks::kObservableReality, threshold, [&](const TrajectorySample& s) {
    double worst = 0.0;
    for (const auto& spec : observables) {
      const Matrix a = realize_observable(spec, s.hamiltonian, s.frame, s.dressing.theta, s.state.t);
      worst = std::max(worst, std::abs(expectation(s.state, a, s.dressing.theta).imag()));
    }
    return worst;
  });
}

InvariantReport check_observable_quasi_hermiticity(const Trajectory& trajectory,
                                                   const std::vector<ObservableSpec>& observables,
                                                   double threshold) {
  return over_samples(trajectory, checks::kObservableQuasiHermiticity, threshold, [&](const TrajectorySample& s) {
    double worst = 0.0;
    for (const auto& spec : observables) {
      const Matrix a = realize_observable(spec, s.hamiltonian, s.frame, s.dressing.theta, s.state.t);
      worst = std::max(worst, quasi_hermiticity_residual(a, s.dressing.theta));
    }
    return worst;
  });
}

InvariantReport check_quasi_hermiticity(const Trajectory& trajectory, double threshold) {
  return over_samples(trajectory, checks::kQuasiHermiticity, threshold, [](const TrajectorySample& s) {
    return quasi_hermiticity_residual(s.hamiltonian, s.dressing.theta);
  });
}

InvariantReport check_isospectrality(const Trajectory& trajectory, double threshold) {
  return over_samples(trajectory, checks::kIsospectrality, threshold,
                      [](const TrajectorySample& s) { return isospectrality_residual(s); });
}

InvariantReport check_hermitized_hermiticity(const Trajectory& trajectory, double threshold) {
  return over_samples(trajectory, checks::kHermitizedHermiticity, threshold,
                      [](const TrajectorySample& s) { return max_norm(s.hermitized - s.hermitized.adjoint()); });
}

InvariantReport check_left_right_duality(const Trajectory& trajectory, double threshold) {
  return over_samples(trajectory, checks::kLeftRightDuality, threshold,
                      [](const TrajectorySample& s) { return duality_residual(s); });
}

InvariantReport check_propagator_right(const Trajectory& trajectory, double threshold) {
  const Matrix& omega0 = trajectory.initial().dressing.omega;
  return over_samples(trajectory, checks::kPropagatorRight, threshold, [&](const TrajectorySample& s) {
    const Matrix oracle = s.dressing.omega_inv * s.propagators.u_std * omega0;
    return max_norm(s.propagators.u_right - oracle);
  });
}

InvariantReport check_propagator_left(const Trajectory& trajectory, double threshold) {
  const Matrix omega0_inv_dag = trajectory.initial().dressing.omega_inv.adjoint();
  return over_samples(trajectory, checks::kPropagatorLeft, threshold, [&](const TrajectorySample& s) {
    const Matrix oracle = s.dressing.omega.adjoint() * s.propagators.u_std * omega0_inv_dag;
    return max_norm(s.propagators.u_left_dag - oracle);
  });
}

InvariantReport check_intertwining(const Trajectory& trajectory, double threshold) {
  return over_samples(trajectory, checks::kIntertwining, threshold, [](const TrajectorySample& s) {
    const auto n = s.propagators.u_right.rows();
    return max_norm(s.propagators.u_left_dag.adjoint() * s.propagators.u_right - Matrix::Identity(n, n));
  });
}

InvariantReport check_spectrum_reality(const Trajectory& trajectory, double threshold) {
  return over_samples(trajectory, checks::kSpectrumReality, threshold,
                      [](const TrajectorySample& s) { return s.energies.imag().cwiseAbs().maxCoeff(); });
}

std::vector<InvariantReport> run_checks(const Trajectory& trajectory, const std::vector<ObservableSpec>& observables,
                                        const std::vector<std::string>& names,
                                        const std::map<std::string, double>& overrides) {
  if (trajectory.samples.empty()) throw NumericalError("run_checks: empty trajectory");
  struct Entry {
    const char* name;
    bool applicable;
    std::function<InvariantReport(double)> run;
  };
  const Trajectory& tr = trajectory;
  const bool right = has_right(tr);
  const bool both = right && has_left(tr);
  const bool props = tr.has_propagators;
  const bool obs = !observables.empty();
  const std::vector<Entry> entries{
      {checks::kThetaNorm, right, [&](double th) { return check_norm_conservation(tr, th); }},
      {checks::kLeftRightNorm, both, [&](double th) { return check_left_right_norm_conservation(tr, th); }},
      {checks::kEquivalence, right, [&](double th) { return check_equivalence(tr, th); }},
      {checks::kStandardUnitarity, true, [&](double th) { return check_standard_unitarity(tr, th); }},
      {checks::kQuasiHermiticity, true, [&](double th) { return check_quasi_hermiticity(tr, th); }},
      {checks::kIsospectrality, true, [&](double th) { return check_isospectrality(tr, th); }},
      {checks::kHermitizedHermiticity, true, [&](double th) { return check_hermitized_hermiticity(tr, th); }},
      {checks::kSpectrumReality, true, [&](double th) { return check_spectrum_reality(tr, th); }},
      {checks::kLeftRightDuality, both, [&](double th) { return check_left_right_duality(tr, th); }},
      {checks::kPropagatorRight, props, [&](double th) { return check_propagator_right(tr, th); }},
      {checks::kPropagatorLeft, props, [&](double th) { return check_propagator_left(tr, th); }},
      {checks::kIntertwining, props, [&](double th) { return check_intertwining(tr, th); }},
      {checks::kObservableQuasiHermiticity, obs,
       [&](double th) { return check_observable_quasi_hermiticity(tr, observables, th); }},
      {checks::kObservableReality, obs && right,
       [&](double th) { return check_observable_reality(tr, observables, th); }},
  };

  for (const auto& [name, value] : overrides) {
    if (!default_thresholds().contains(name)) throw ConfigError("unknown check '" + name + "'");
  }
  const auto threshold_of = [&](const std::string& name) {
    auto it = overrides.find(name);
    return it != overrides.end() ? it->second : default_thresholds().at(name);
  };

  std::vector<InvariantReport> reports;
  if (names.empty()) {
    for (const auto& e : entries) {
      if (e.applicable) reports.push_back(e.run(threshold_of(e.name)));
    }
    return reports;
  }
  for (const auto& name : names) {
    auto it = std::find_if(entries.begin(), entries.end(), [&](const Entry& e) { return name == e.name; });
    if (it == entries.end()) throw ConfigError("unknown check '" + name + "'");
    if (!it->applicable) {
      throw ConfigError("check '" + name + "' is not available for this run (needs another picture, "
                        "propagators or observables)");
    }
    reports.push_back(it->run(threshold_of(name)));
  }
  return reports;
}

bool all_passed(const std::vector<InvariantReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const InvariantReport& r) { return r.passed; });
}

}  // namespace qhdyn
