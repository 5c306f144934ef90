#include "qhdyn/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <thread>

#include "qhdyn/errors.hpp"

namespace qhdyn {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const ObservableSpec& observable(const ScenarioConfig& config, const std::string& name) {
  for (const auto& o : config.model.observables) {
    if (o.name == name) return o;
  }
  throw ConfigError("unknown observable '" + name + "'");
}

}  // namespace

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::vector<std::string> csv_columns(const ScenarioConfig& config) {
  std::vector<std::string> cols{"t",           "theta_norm", "std_norm",  "equivalence_residual",
                                "quasi_hermiticity_residual", "theta_min_eig", "theta_cond"};
  for (int n = 1; n <= config.model.dimension; ++n) {
    cols.push_back("E" + std::to_string(n) + "_re");
    cols.push_back("E" + std::to_string(n) + "_im");
  }
  for (const auto& out : config.outputs) {
    if (out == "duality_residual" || out == "generator_deviation") {
      cols.push_back(out);
    } else {
      cols.push_back(out + "_re");
      cols.push_back(out + "_im");
    }
  }
  return cols;
}

std::vector<std::vector<double>> csv_rows(const ScenarioConfig& config, const Trajectory& trajectory) {
  const bool right = trajectory.picture != Picture::kLeft;
  const bool left = trajectory.picture != Picture::kRight;
  const auto& initial = trajectory.initial();
  std::vector<std::vector<double>> rows;
  rows.reserve(trajectory.samples.size());
  for (const auto& s : trajectory.samples) {
    std::vector<double> row;
    row.push_back(s.state.t);
    row.push_back(right ? theta_norm(s) : kNaN);
    row.push_back(right ? s.state.phi_right.squaredNorm() : kNaN);
    row.push_back(right ? equivalence_residual(s, initial) : kNaN);
    row.push_back(quasi_hermiticity_residual(s.hamiltonian, s.dressing.theta));
    row.push_back(s.dressing.metric.min_eigenvalue);
    row.push_back(s.dressing.metric.condition);
    for (Eigen::Index k = 0; k < s.energies.size(); ++k) {
      row.push_back(s.energies(k).real());
      row.push_back(s.energies(k).imag());
    }
    for (const auto& out : config.outputs) {
      if (out == "duality_residual") {
        row.push_back(right && left ? duality_residual(s) : kNaN);
      } else if (out == "generator_deviation") {
        row.push_back(max_norm(s.generator - s.hamiltonian));
      } else if (out == "left_norm") {
        const Complex v = right && left ? left_right_norm(s) : Complex(kNaN, kNaN);
        row.push_back(v.real());
        row.push_back(v.imag());
      } else {
        Complex v(kNaN, kNaN);
        if (right) {
          const Matrix a = out == "hamiltonian" ? s.hamiltonian
                           : out == "generator"
                               ? s.generator
                               : realize_observable(observable(config, out), s.hamiltonian, s.frame,
                                                    s.dressing.theta, s.state.t);
          v = expectation(s.state, a, s.dressing.theta);
        }
        row.push_back(v.real());
        row.push_back(v.imag());
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

RunResult run_scenario(const ScenarioConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  DressingTrack::Options options;
  options.reality = config.reality.value_or(config.model.family == Family::kCubicTrunc ? RealityPolicy::kReport
                                                                                        : RealityPolicy::kAssert);
  const DressingTrack track(config.model, config.mu, config.time.t0, config.time.t1, config.time.dt, options);

  PropagationOptions prop;
  prop.picture = picture_of(config);
  prop.generator = config.generator;
  prop.mode = config.omega_dot_mode.value_or(track.default_mode());
  prop.propagators = config.propagators;
  const Vector phi0 = initial_vector(config, track.half_grid_frames().front());

  RunResult result;
  result.trajectory = propagate_quasi(track, phi0, prop);

  std::vector<std::string> names;
  std::map<std::string, double> overrides;
  for (const auto& c : config.checks) {
    names.push_back(c.name);
    if (c.threshold) overrides[c.name] = *c.threshold;
  }
  RunReport& report = result.report;
  report.scenario_name = config.name;
  report.scenario = config.source;
  report.invariants = run_checks(result.trajectory, config.model.observables, names, overrides);
  report.columns = csv_columns(config);
  report.rows = csv_rows(config, result.trajectory);
  report.warnings = result.trajectory.warnings;
  report.exit_code = all_passed(report.invariants) ? ExitCode::kSuccess : ExitCode::kCheckFailure;
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

RunReport run(const ScenarioConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  try {
    return run_scenario(config).report;
  } catch (const Error& e) {
    RunReport report;
    report.scenario_name = config.name;
    report.scenario = config.source;
    report.columns = csv_columns(config);
    report.error = e.what();
    report.exit_code = e.exit_code();
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  }
}

void write_csv(std::ostream& out, const RunReport& report) {
  for (std::size_t c = 0; c < report.columns.size(); ++c) out << (c ? "," : "") << report.columns[c];
  out << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
    out << '\n';
  }
}

void write_summary(std::ostream& out, const RunReport& report) {
  out << "scenario: " << report.scenario_name << '\n';
  out << "version:  " << report.version << '\n';
  if (report.error) {
    out << "status:   ERROR (exit " << static_cast<int>(report.exit_code) << ")\n";
    out << "error:    " << *report.error << '\n';
  } else {
    out << "status:   " << (report.passed() ? "PASS" : "FAIL") << '\n';
    out << "steps:    " << (report.rows.empty() ? 0 : report.rows.size() - 1) << '\n';
    for (const auto& r : report.invariants) {
      char line[256];
      std::snprintf(line, sizeof(line), "  [%s] %-30s max %.3e  threshold %.1e\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.max_residual, r.threshold);
      out << line;
    }
  }
  for (const auto& w : report.warnings) out << "warning:  " << w << '\n';
  char wall[64];
  std::snprintf(wall, sizeof(wall), "%.3f", report.wall_seconds);
  out << "wall:     " << wall << " s\n";
}

json report_json(const RunReport& report) {
  json j;
  j["scenario_name"] = report.scenario_name;
  j["version"] = report.version;
  j["exit_code"] = static_cast<int>(report.exit_code);
  j["status"] = report.error ? "error" : (report.passed() ? "pass" : "fail");
  if (report.error) j["error"] = *report.error;
  j["invariants"] = json::array();
  for (const auto& r : report.invariants) {
    j["invariants"].push_back(
        {{"name", r.name}, {"max_residual", r.max_residual}, {"threshold", r.threshold}, {"passed", r.passed}});
  }
  j["warnings"] = report.warnings;
  j["rows"] = report.rows.size();
  j["wall_seconds"] = report.wall_seconds;
  j["scenario"] = report.scenario;
  return j;
}

std::vector<SweepPoint> sweep(const json& document, const std::string& path, const std::vector<json>& values,
                              unsigned jobs) {
  {
    // The path must resolve even when there is nothing to run.
    json probe = document;
    set_json_path(probe, path, json(), false);
  }
  std::vector<SweepPoint> points(values.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      points[i].value = values[i];
      json doc = document;
      set_json_path(doc, path, values[i], false);
      try {
        points[i].report = run(scenario_from_json(doc));
      } catch (const Error& e) {
        RunReport r;
        r.scenario = doc;
        r.scenario_name = doc.value("name", "scenario");
        r.error = e.what();
        r.exit_code = e.exit_code();
        points[i].report = std::move(r);
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(values.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  if (!values.empty()) worker();
  for (auto& th : pool) th.join();
  return points;
}

void write_sweep_summary(std::ostream& out, const std::vector<SweepPoint>& points) {
  if (points.empty()) return;
  std::vector<std::string> names;
  for (const auto& p : points) {
    for (const auto& r : p.report.invariants) {
      if (std::find(names.begin(), names.end(), r.name) == names.end()) names.push_back(r.name);
    }
  }
  out << "value,exit_code";
  for (const auto& n : names) out << ',' << n << ',' << n << "_ratio";
  out << '\n';
  std::map<std::string, double> previous;
  for (const auto& p : points) {
    out << (p.value.is_string() ? p.value.get<std::string>() : p.value.dump()) << ','
        << static_cast<int>(p.report.exit_code);
    for (const auto& n : names) {
      double residual = kNaN;
      for (const auto& r : p.report.invariants) {
        if (r.name == n) residual = r.max_residual;
      }
      const auto it = previous.find(n);
      const double ratio = it != previous.end() ? it->second / residual : kNaN;
      out << ',' << format_number(residual) << ',' << format_number(ratio);
      previous[n] = residual;
    }
    out << '\n';
  }
}

}  // namespace qhdyn
