#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qhdyn/errors.hpp"
#include "qhdyn/scenario.hpp"
#include "qhdyn/verify.hpp"

namespace qhdyn {

inline constexpr const char* kVersionTag = "qhdyn 0.1.0";

struct RunReport {
  std::string scenario_name;
  nlohmann::json scenario;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<InvariantReport> invariants;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;
  std::string version = kVersionTag;
  /// Set when the run aborted on a domain error; rows and invariants are then empty.
  std::optional<std::string> error;
  ExitCode exit_code = ExitCode::kSuccess;

  bool passed() const { return exit_code == ExitCode::kSuccess; }
};

/// Result of run() plus the trajectory it was computed from.
struct RunResult {
  RunReport report;
  Trajectory trajectory;
};

/// Runs the full pipeline. Domain errors propagate as exceptions.
RunResult run_scenario(const ScenarioConfig& config);

/// Runs and converts qhdyn::Error into a report with the matching exit code.
RunReport run(const ScenarioConfig& config);

std::vector<std::string> csv_columns(const ScenarioConfig& config);
std::vector<std::vector<double>> csv_rows(const ScenarioConfig& config, const Trajectory& trajectory);

/// Numbers are written with 17 significant digits.
std::string format_number(double value);
void write_csv(std::ostream& out, const RunReport& report);
void write_summary(std::ostream& out, const RunReport& report);
nlohmann::json report_json(const RunReport& report);

struct SweepPoint {
  nlohmann::json value;
  RunReport report;
};

/// Independent runs with the value at `path` replaced by each entry of `values`,
/// using up to `jobs` threads. Throws ConfigError if `path` does not resolve.
std::vector<SweepPoint> sweep(const nlohmann::json& document, const std::string& path,
                              const std::vector<nlohmann::json>& values, unsigned jobs = 1);

/// One row per sweep value with max residual per check, plus the ratio to the
/// previous row's residual.
void write_sweep_summary(std::ostream& out, const std::vector<SweepPoint>& points);

}  // namespace qhdyn
