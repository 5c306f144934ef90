#include "qhdyn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "qhdyn/errors.hpp"
#include "qhdyn/verify.hpp"

namespace qhdyn {

using nlohmann::json;

std::size_t TimeGrid::steps() const { return static_cast<std::size_t>(std::llround((t1 - t0) / dt)); }

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError("missing required key '" + join(path, key) + "'");
  return obj.at(key);
}

double as_real(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError("'" + path + "' must be a number");
  return v.get<double>();
}

Complex as_complex(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  if (v.is_object() && v.contains("re")) {
    return {as_real(v.at("re"), path + ".re"), v.contains("im") ? as_real(v.at("im"), path + ".im") : 0.0};
  }
  throw ConfigError("'" + path + "' must be a number or a [re, im] pair");
}

double real_or(const json& obj, const char* key, double fallback, const std::string& path) {
  return obj.contains(key) ? as_real(obj.at(key), join(path, key)) : fallback;
}

std::string string_of(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError("'" + path + "' must be a string");
  return v.get<std::string>();
}

Schedule parse_schedule(const json& v, const std::string& path) {
  if (!v.is_object()) return Schedule::constant(as_complex(v, path));
  Schedule s;
  s.kind = schedule_kind_from_string(string_of(require(v, "kind", path), join(path, "kind")));
  s.base = v.contains("base") ? as_complex(v.at("base"), join(path, "base")) : Complex{1.0, 0.0};
  s.rate = real_or(v, "rate", 0.0, path);
  s.amplitude = real_or(v, "amplitude", 0.0, path);
  s.frequency = real_or(v, "frequency", 0.0, path);
  s.phase = real_or(v, "phase", 0.0, path);
  for (const auto& [key, _] : v.items()) {
    static const std::set<std::string> known{"kind", "base", "rate", "amplitude", "frequency", "phase"};
    if (!known.contains(key)) throw ConfigError("unknown key '" + join(path, key) + "'");
  }
  return s;
}

Matrix parse_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError("'" + path + "' must be a non-empty list of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols = v[0].is_array() ? static_cast<Eigen::Index>(v[0].size()) : Eigen::Index{0};
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError("'" + path + "' rows must all have the same length");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = as_complex(row[static_cast<std::size_t>(j)], path + "[" + std::to_string(i) + "][" +
                                                                  std::to_string(j) + "]");
    }
  }
  return m;
}

ObservableSpec parse_observable(const json& v, const std::string& path) {
  ObservableSpec spec;
  spec.name = string_of(require(v, "name", path), join(path, "name"));
  spec.source = observable_source_from_string(string_of(require(v, "source", path), join(path, "source")));
  if (spec.source == ObservableSource::kUserMatrix) {
    spec.data = parse_matrix(require(v, "matrix", path), join(path, "matrix"));
  }
  if (spec.source == ObservableSource::kFunctionOfFrame) {
    spec.rule = frame_rule_from_string(string_of(require(v, "rule", path), join(path, "rule")));
    if (spec.rule == FrameRule::kMetricSeed) {
      spec.data = parse_matrix(require(v, "matrix", path), join(path, "matrix"));
    } else {
      const auto& w = require(v, "weights", path);
      if (!w.is_array()) throw ConfigError("'" + join(path, "weights") + "' must be a list");
      for (std::size_t k = 0; k < w.size(); ++k) {
        spec.weights.push_back(as_real(w[k], join(path, "weights") + "[" + std::to_string(k) + "]"));
      }
    }
    if (v.contains("scale")) spec.scale = parse_schedule(v.at("scale"), join(path, "scale"));
  }
  return spec;
}

Vector parse_vector(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError("'" + path + "' must be a non-empty list");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = as_complex(v[k], path + "[" + std::to_string(k) + "]");
  }
  return out;
}

const std::set<std::string>& special_outputs() {
  static const std::set<std::string> names{"hamiltonian", "generator", "left_norm", "duality_residual",
                                           "generator_deviation"};
  return names;
}

}  // namespace

json parse_loose_value(std::string_view text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) return json(std::string(text));
  return v;
}

std::pair<std::string, json> parse_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(text) + "' must have the form key=value");
  }
  return {std::string(text.substr(0, eq)), parse_loose_value(text.substr(eq + 1))};
}

void set_json_path(json& doc, std::string_view path, const json& value, bool create) {
  if (path.empty()) throw ConfigError("empty parameter path");
  json* node = &doc;
  std::size_t start = 0;
  const std::string full(path);
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key(path.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    const bool last = dot == std::string_view::npos;
    if (key.empty()) throw ConfigError("malformed parameter path '" + full + "'");
    if (node->is_array()) {
      const bool numeric = std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; });
      if (!numeric || std::stoul(key) >= node->size()) {
        throw ConfigError("parameter path '" + full + "' does not resolve (bad index '" + key + "')");
      }
      json& child = (*node)[std::stoul(key)];
      if (last) {
        child = value;
        return;
      }
      node = &child;
    } else if (node->is_object()) {
      if (!node->contains(key) && !(last && create)) {
        throw ConfigError("parameter path '" + full + "' does not resolve (no key '" + key + "')");
      }
      if (last) {
        (*node)[key] = value;
        return;
      }
      node = &(*node)[key];
    } else {
      throw ConfigError("parameter path '" + full + "' does not resolve (scalar at '" + key + "')");
    }
    start = dot + 1;
  }
}

ScenarioConfig scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("scenario document must be an object");
  ScenarioConfig cfg;
  cfg.source = doc;
  if (doc.contains("name")) cfg.name = string_of(doc.at("name"), "name");
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_integer()) throw ConfigError("'seed' must be an integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }

  const json& time = require(doc, "time", "");
  cfg.time.t0 = time.contains("t0") ? as_real(time.at("t0"), "time.t0") : 0.0;
  cfg.time.t1 = as_real(require(time, "t1", "time"), "time.t1");
  cfg.time.dt = as_real(require(time, "dt", "time"), "time.dt");
  if (!(cfg.time.dt > 0.0)) throw ConfigError("time.dt must be positive");
  if (!(cfg.time.t1 > cfg.time.t0)) throw ConfigError("time.t1 must exceed time.t0");
  {
    const double ratio = (cfg.time.t1 - cfg.time.t0) / cfg.time.dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
      throw ConfigError("time: (t1 - t0) / dt must be a whole number of steps");
    }
  }

  const json& model = require(doc, "model", "");
  HamiltonianModel m;
  m.family = family_from_string(string_of(require(model, "family", "model"), "model.family"));
  if (model.contains("dimension")) {
    if (!model.at("dimension").is_number_integer()) throw ConfigError("'model.dimension' must be an integer");
    m.dimension = model.at("dimension").get<int>();
  } else if (m.family == Family::kTriangular2 || m.family == Family::kPT2) {
    m.dimension = 2;
  } else {
    throw ConfigError("missing required key 'model.dimension'");
  }
  const json& params = require(model, "params", "model");
  if (!params.is_object()) throw ConfigError("'model.params' must be an object");
  for (const auto& [key, value] : params.items()) {
    const std::string path = "model.params." + key;
    if (value.is_object() && value.contains("kind")) {
      Schedule s = parse_schedule(value, path);
      m.schedules[key] = s;
      m.params[key] = eval_schedule(s, cfg.time.t0);
    } else {
      m.params[key] = as_complex(value, path);
    }
  }
  if (model.contains("observables")) {
    const json& list = model.at("observables");
    if (!list.is_array()) throw ConfigError("'model.observables' must be a list");
    for (std::size_t k = 0; k < list.size(); ++k) {
      m.observables.push_back(parse_observable(list[k], "model.observables[" + std::to_string(k) + "]"));
    }
  }
  m.seed = model.contains("seed") ? model.at("seed").get<std::uint64_t>() : cfg.seed;
  cfg.model = make_model(std::move(m), cfg.time.t0);
  for (const auto& [name, s] : cfg.model.schedules) {
    for (double t : {cfg.time.t0, cfg.time.t1}) {
      const Complex v = eval_schedule(s, t);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw ConfigError("model.params." + name + ": schedule is not finite on the run interval");
      }
    }
  }

  const json& mu = require(doc, "mu", "");
  if (!mu.is_array()) throw ConfigError("'mu' must be a list of schedules");
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const std::string path = "mu[" + std::to_string(k) + "]";
    Schedule s = parse_schedule(mu[k], path);
    validate_nonvanishing(s, cfg.time.t0, cfg.time.t1, path);
    cfg.mu.push_back(s);
  }
  if (static_cast<int>(cfg.mu.size()) != cfg.model.dimension) {
    throw ConfigError("mu has " + std::to_string(cfg.mu.size()) + " entries but model dimension is " +
                      std::to_string(cfg.model.dimension));
  }

  if (doc.contains("initial_state")) {
    const json& init = doc.at("initial_state");
    if (init.is_object() && init.contains("vector")) {
      cfg.initial_state.preset = InitialPreset::kVector;
      cfg.initial_state.vector = parse_vector(init.at("vector"), "initial_state.vector");
      if (cfg.initial_state.vector.size() != cfg.model.dimension) {
        throw ConfigError("initial_state.vector has the wrong dimension");
      }
    } else if (init.is_object() && init.contains("preset")) {
      const std::string preset = string_of(init.at("preset"), "initial_state.preset");
      if (preset == "uniform") {
        cfg.initial_state.preset = InitialPreset::kUniform;
      } else if (preset == "eigenstate") {
        cfg.initial_state.preset = InitialPreset::kEigenstate;
        const json& k = require(init, "index", "initial_state");
        if (!k.is_number_integer()) throw ConfigError("'initial_state.index' must be an integer");
        cfg.initial_state.eigenstate = k.get<int>();
        if (cfg.initial_state.eigenstate < 0 || cfg.initial_state.eigenstate >= cfg.model.dimension) {
          throw ConfigError("initial_state.index out of range");
        }
      } else {
        throw ConfigError("unknown initial_state.preset '" + preset + "'");
      }
    } else {
      throw ConfigError("'initial_state' needs either 'vector' or 'preset'");
    }
  }

  if (doc.contains("pictures")) {
    cfg.pictures.clear();
    for (const auto& p : doc.at("pictures")) {
      const std::string name = string_of(p, "pictures");
      if (name != "right" && name != "left" && name != "standard") {
        throw ConfigError("unknown picture '" + name + "'");
      }
      cfg.pictures.push_back(name);
    }
    const bool any = std::any_of(cfg.pictures.begin(), cfg.pictures.end(),
                                 [](const std::string& p) { return p == "right" || p == "left"; });
    if (!any) throw ConfigError("pictures must include 'right' or 'left'");
  }

  if (doc.contains("checks")) {
    for (const auto& c : doc.at("checks")) {
      CheckRequest req;
      if (c.is_string()) {
        req.name = c.get<std::string>();
      } else {
        req.name = string_of(require(c, "name", "checks"), "checks.name");
        if (c.contains("threshold")) req.threshold = as_real(c.at("threshold"), "checks." + req.name + ".threshold");
      }
      if (!default_thresholds().contains(req.name)) throw ConfigError("unknown check '" + req.name + "'");
      cfg.checks.push_back(req);
    }
  }

  if (doc.contains("outputs")) {
    std::set<std::string> observables;
    for (const auto& o : cfg.model.observables) observables.insert(o.name);
    for (const auto& o : doc.at("outputs")) {
      const std::string name = string_of(o, "outputs");
      if (!observables.contains(name) && !special_outputs().contains(name)) {
        throw ConfigError("unknown output column '" + name + "'");
      }
      cfg.outputs.push_back(name);
    }
  }

  if (doc.contains("omega_dot")) {
    const std::string mode = string_of(doc.at("omega_dot"), "omega_dot");
    if (mode == "analytic-mu-only") {
      cfg.omega_dot_mode = OmegaDotMode::kAnalyticMuOnly;
      if (cfg.model.is_time_dependent()) {
        throw InconsistentModeError("omega_dot: analytic-mu-only needs a time-independent Hamiltonian");
      }
    } else if (mode == "finite-difference") {
      cfg.omega_dot_mode = OmegaDotMode::kFiniteDifference;
    } else if (mode != "auto") {
      throw ConfigError("unknown omega_dot mode '" + mode + "'");
    }
  }
  if (doc.contains("generator")) {
    const std::string g = string_of(doc.at("generator"), "generator");
    if (g == "generator") {
      cfg.generator = GeneratorChoice::kGenerator;
    } else if (g == "hamiltonian") {
      cfg.generator = GeneratorChoice::kHamiltonian;
    } else {
      throw ConfigError("unknown generator '" + g + "' (expected 'generator' or 'hamiltonian')");
    }
  }
  if (doc.contains("reality")) {
    const std::string r = string_of(doc.at("reality"), "reality");
    if (r == "assert") {
      cfg.reality = RealityPolicy::kAssert;
    } else if (r == "report") {
      cfg.reality = RealityPolicy::kReport;
    } else {
      throw ConfigError("unknown reality policy '" + r + "'");
    }
  }
  if (doc.contains("propagators")) {
    if (!doc.at("propagators").is_boolean()) throw ConfigError("'propagators' must be a boolean");
    cfg.propagators = doc.at("propagators").get<bool>();
  }
  return cfg;
}

ScenarioConfig parse_scenario(std::string_view text) {
  json doc = json::parse(text, nullptr, false, true);
  if (doc.is_discarded()) throw ConfigError("scenario document is not valid JSON");
  return scenario_from_json(doc);
}

Vector initial_vector(const ScenarioConfig& config, const BiorthogonalFrame& frame0) {
  switch (config.initial_state.preset) {
    case InitialPreset::kVector: return config.initial_state.vector;
    case InitialPreset::kEigenstate: return frame0.right.col(config.initial_state.eigenstate);
    case InitialPreset::kUniform: return Vector::Ones(config.model.dimension);
  }
  return Vector::Ones(config.model.dimension);
}

Picture picture_of(const ScenarioConfig& config) {
  const auto has = [&](const char* p) {
    return std::find(config.pictures.begin(), config.pictures.end(), p) != config.pictures.end();
  };
  if (has("right") && has("left")) return Picture::kBoth;
  return has("left") ? Picture::kLeft : Picture::kRight;
}

}  // namespace qhdyn
