#include "qhdyn/model.hpp"

#include <cmath>
#include <random>
#include <set>
#include <string>

#include "qhdyn/errors.hpp"

namespace qhdyn {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::kTriangular2: return "triangular2";
    case Family::kPT2: return "pt2";
    case Family::kSimilarityRand: return "similarity-rand";
    case Family::kCubicTrunc: return "cubic-trunc";
  }
  return "unknown";
}

Family family_from_string(std::string_view name) {
  if (name == "triangular2") return Family::kTriangular2;
  if (name == "pt2") return Family::kPT2;
  if (name == "similarity-rand") return Family::kSimilarityRand;
  if (name == "cubic-trunc") return Family::kCubicTrunc;
  throw ConfigError("unknown Hamiltonian family '" + std::string(name) + "'");
}

std::string_view to_string(ObservableSource source) {
  switch (source) {
    case ObservableSource::kHamiltonian: return "hamiltonian-itself";
    case ObservableSource::kUserMatrix: return "user-matrix";
    case ObservableSource::kFunctionOfFrame: return "function-of-frame";
  }
  return "unknown";
}

ObservableSource observable_source_from_string(std::string_view name) {
  if (name == "hamiltonian-itself") return ObservableSource::kHamiltonian;
  if (name == "user-matrix") return ObservableSource::kUserMatrix;
  if (name == "function-of-frame") return ObservableSource::kFunctionOfFrame;
  throw ConfigError("unknown observable source '" + std::string(name) + "'");
}

std::string_view to_string(FrameRule rule) {
  switch (rule) {
    case FrameRule::kMetricSeed: return "metric-seed";
    case FrameRule::kSpectralWeights: return "spectral-weights";
  }
  return "unknown";
}

FrameRule frame_rule_from_string(std::string_view name) {
  if (name == "metric-seed") return FrameRule::kMetricSeed;
  if (name == "spectral-weights") return FrameRule::kSpectralWeights;
  throw ConfigError("unknown observable rule '" + std::string(name) + "'");
}

Complex HamiltonianModel::parameter(const std::string& name, double t) const {
  if (auto it = schedules.find(name); it != schedules.end()) return eval_schedule(it->second, t);
  if (auto it = params.find(name); it != params.end()) return it->second;
  throw ConfigError("model parameter '" + name + "' is not defined");
}

bool HamiltonianModel::is_time_dependent() const {
  for (const auto& [name, schedule] : schedules) {
    if (!schedule.is_constant()) return true;
  }
  return false;
}

namespace {

std::vector<std::string> required_parameters(const HamiltonianModel& model) {
  switch (model.family) {
    case Family::kTriangular2: return {"e1", "e2", "c"};
    case Family::kPT2: return {"gamma", "s"};
    case Family::kCubicTrunc: return {"g"};
    case Family::kSimilarityRand: {
      std::vector<std::string> names;
      for (int n = 1; n <= model.dimension; ++n) names.push_back("e" + std::to_string(n));
      return names;
    }
  }
  return {};
}

void require_real(const HamiltonianModel& model, const std::string& name, double t) {
  if (model.parameter(name, t).imag() != 0.0) {
    throw ConfigError("parameter '" + name + "' of family " + std::string(to_string(model.family)) +
                      " must be real");
  }
}

// Ladder operator a in an M-level truncation: a|n> = sqrt(n)|n-1>.
Matrix annihilation(int levels) {
  Matrix a = Matrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace

Matrix oscillator_kinetic(int dimension) {
  const int levels = dimension + 2;
  const Matrix a = annihilation(levels);
  const Matrix p = kI * (a.adjoint() - a) / std::sqrt(2.0);
  return (p * p).topLeftCorner(dimension, dimension);
}

Matrix oscillator_cubic(int dimension) {
  const int levels = dimension + 3;
  const Matrix a = annihilation(levels);
  const Matrix x = (a + a.adjoint()) / std::sqrt(2.0);
  return (x * x * x).topLeftCorner(dimension, dimension);
}

Matrix random_similarity(int dimension, std::uint64_t seed, double max_condition) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Matrix s(dimension, dimension);
    for (int j = 0; j < dimension; ++j) {
      for (int i = 0; i < dimension; ++i) {
        const double re = normal(engine);
        const double im = normal(engine);
        s(i, j) = Complex(re, im) / std::sqrt(2.0 * dimension);
      }
    }
    s += Matrix::Identity(dimension, dimension);
    const Eigen::JacobiSVD<Matrix> svd(s);
    const RealVector& sv = svd.singularValues();
    if (sv(dimension - 1) > 0.0 && sv(0) / sv(dimension - 1) < max_condition) return s;
  }
  throw ConfigError("could not sample a well-conditioned similarity transform");
}

HamiltonianModel make_model(HamiltonianModel model, double t_ref) {
  if (model.dimension < 2) throw ConfigError("model.dimension must be at least 2");
  if ((model.family == Family::kTriangular2 || model.family == Family::kPT2) && model.dimension != 2) {
    throw ConfigError("family " + std::string(to_string(model.family)) + " requires dimension 2");
  }
  for (const auto& [name, schedule] : model.schedules) {
    if (!model.params.contains(name)) {
      throw ConfigError("schedule refers to unknown parameter '" + name + "'");
    }
  }
  for (const auto& name : required_parameters(model)) {
    if (!model.params.contains(name)) {
      throw ConfigError("model.params." + name + " is required for family " +
                        std::string(to_string(model.family)));
    }
  }

  const int n = model.dimension;
  switch (model.family) {
    case Family::kTriangular2:
      break;
    case Family::kPT2: {
      require_real(model, "gamma", t_ref);
      require_real(model, "s", t_ref);
      const double gamma = model.parameter("gamma", t_ref).real();
      const double s = model.parameter("s", t_ref).real();
      if (s <= 0.0) throw ConfigError("pt2: coupling s must be positive");
      if (std::abs(gamma) >= s) {
        throw ConfigError("pt2: |gamma| must be below s at t = " + std::to_string(t_ref) +
                          " for a real spectrum");
      }
      break;
    }
    case Family::kSimilarityRand:
      for (int k = 1; k <= n; ++k) require_real(model, "e" + std::to_string(k), t_ref);
      model.similarity = random_similarity(n, model.seed);
      model.similarity_inverse = model.similarity.inverse();
      break;
    case Family::kCubicTrunc: {
      require_real(model, "g", t_ref);
      if (model.parameter("g", t_ref).real() <= 0.0) throw ConfigError("cubic-trunc: coupling g must be positive");
      model.kinetic = oscillator_kinetic(n);
      model.cubic = oscillator_cubic(n);
      break;
    }
  }

  std::set<std::string> names;
  for (const auto& obs : model.observables) {
    if (obs.name.empty()) throw ConfigError("observable name must not be empty");
    if (!names.insert(obs.name).second) throw ConfigError("duplicate observable '" + obs.name + "'");
    if (obs.source == ObservableSource::kUserMatrix ||
        (obs.source == ObservableSource::kFunctionOfFrame && obs.rule == FrameRule::kMetricSeed)) {
      if (obs.data.rows() != n || obs.data.cols() != n) {
        throw ConfigError("observable '" + obs.name + "' matrix must be " + std::to_string(n) + "x" +
                          std::to_string(n));
      }
    }
    if (obs.source == ObservableSource::kFunctionOfFrame && obs.rule == FrameRule::kMetricSeed &&
        max_norm(obs.data - obs.data.adjoint()) > 1e-12) {
      throw ConfigError("observable '" + obs.name + "': metric-seed matrix must be Hermitian");
    }
    if (obs.source == ObservableSource::kFunctionOfFrame && obs.rule == FrameRule::kSpectralWeights &&
        static_cast<int>(obs.weights.size()) != n) {
      throw ConfigError("observable '" + obs.name + "' needs " + std::to_string(n) + " weights");
    }
    if (obs.source == ObservableSource::kFunctionOfFrame && obs.scale.base.imag() != 0.0) {
      throw ConfigError("observable '" + obs.name + "': scale schedule must be real");
    }
  }
  return model;
}

Matrix build_hamiltonian(const HamiltonianModel& model, double t) {
  const int n = model.dimension;
  Matrix h = Matrix::Zero(n, n);
  switch (model.family) {
    case Family::kTriangular2:
      h(0, 0) = model.parameter("e1", t);
      h(0, 1) = model.parameter("c", t);
      h(1, 1) = model.parameter("e2", t);
      return h;
    case Family::kPT2: {
      const Complex gamma = model.parameter("gamma", t);
      const Complex s = model.parameter("s", t);
      h(0, 0) = kI * gamma;
      h(0, 1) = s;
      h(1, 0) = s;
      h(1, 1) = -kI * gamma;
      return h;
    }
    case Family::kSimilarityRand: {
      if (model.similarity.rows() != n) throw ConfigError("similarity-rand model was not prepared by make_model");
      Vector e(n);
      for (int k = 0; k < n; ++k) e(k) = model.parameter("e" + std::to_string(k + 1), t);
      return model.similarity * e.asDiagonal() * model.similarity_inverse;
    }
    case Family::kCubicTrunc: {
      if (model.kinetic.rows() != n) throw ConfigError("cubic-trunc model was not prepared by make_model");
      return model.kinetic + kI * model.parameter("g", t) * model.cubic;
    }
  }
  throw ConfigError("unknown Hamiltonian family");
}

}  // namespace qhdyn
