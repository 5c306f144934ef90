#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qhdyn/dressing.hpp"
#include "qhdyn/evolution.hpp"
#include "qhdyn/model.hpp"

namespace qhdyn {

struct TimeGrid {
  double t0 = 0.0;
  double t1 = 1.0;
  double dt = 1e-3;

  std::size_t steps() const;
};

enum class InitialPreset { kVector, kEigenstate, kUniform };

struct InitialState {
  InitialPreset preset = InitialPreset::kUniform;
  int eigenstate = 0;
  Vector vector;
};

struct CheckRequest {
  std::string name;
  std::optional<double> threshold;
};

/// A validated scenario document.
struct ScenarioConfig {
  std::string name = "scenario";
  HamiltonianModel model;
  std::vector<Schedule> mu;
  TimeGrid time;
  InitialState initial_state;
  /// Subset of {"right", "left", "standard"}.
  std::vector<std::string> pictures{"right", "left", "standard"};
  /// Empty means every applicable check with default thresholds.
  std::vector<CheckRequest> checks;
  /// Extra CSV columns: observable names, "hamiltonian", "generator",
  /// "left_norm", "duality_residual", "generator_deviation".
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;
  std::optional<OmegaDotMode> omega_dot_mode;
  GeneratorChoice generator = GeneratorChoice::kGenerator;
  std::optional<RealityPolicy> reality;
  bool propagators = true;
  /// The document after overrides, echoed into reports.
  nlohmann::json source;
};

/// Parses and validates a scenario document (JSON). Throws ConfigError naming
/// the offending key.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig scenario_from_json(const nlohmann::json& doc);

/// Sets the value at a dotted path (array indices as numeric segments).
/// `create` allows the final key to be new. Throws ConfigError if the path
/// does not resolve.
void set_json_path(nlohmann::json& doc, std::string_view path, const nlohmann::json& value, bool create = true);

/// Parses "key=value"; the value is read as JSON when possible, as a string otherwise.
std::pair<std::string, nlohmann::json> parse_override(std::string_view text);
nlohmann::json parse_loose_value(std::string_view text);

Vector initial_vector(const ScenarioConfig& config, const BiorthogonalFrame& frame0);
Picture picture_of(const ScenarioConfig& config);

}  // namespace qhdyn
