#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qhdyn/dressing.hpp"
#include "qhdyn/errors.hpp"
#include "qhdyn/evolution.hpp"
#include "qhdyn/model.hpp"
#include "qhdyn/runner.hpp"
#include "qhdyn/scenario.hpp"
#include "qhdyn/schedule.hpp"
#include "qhdyn/spectral.hpp"

namespace py = pybind11;
using namespace qhdyn;

namespace {

RealityPolicy policy_from(const std::string& name) {
  if (name == "assert") return RealityPolicy::kAssert;
  if (name == "report") return RealityPolicy::kReport;
  throw ConfigError("reality policy must be 'assert' or 'report'");
}

HamiltonianModel model_from(const std::string& family, int dimension, const std::map<std::string, Complex>& params,
                            std::uint64_t seed) {
  HamiltonianModel m;
  m.family = family_from_string(family);
  m.dimension = dimension;
  m.params = params;
  m.seed = seed;
  return make_model(std::move(m));
}

py::dict report_dict(const RunReport& report) {
  py::dict d;
  d["scenario_name"] = report.scenario_name;
  d["exit_code"] = static_cast<int>(report.exit_code);
  d["passed"] = report.passed();
  d["error"] = report.error ? py::object(py::str(*report.error)) : py::object(py::none());
  d["columns"] = report.columns;
  d["rows"] = report.rows;
  py::list invariants;
  for (const auto& r : report.invariants) {
    py::dict item;
    item["name"] = r.name;
    item["max_residual"] = r.max_residual;
    item["threshold"] = r.threshold;
    item["passed"] = r.passed;
    invariants.append(item);
  }
  d["invariants"] = invariants;
  d["warnings"] = report.warnings;
  d["version"] = report.version;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Time-dependent quasi-Hermitian quantum evolution in finite dimensions";

  auto base = py::register_exception<Error>(m, "Error");
  auto config = py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<ExceptionalPointError>(m, "ExceptionalPointError", numerical.ptr());
  py::register_exception<ComplexSpectrumError>(m, "ComplexSpectrumError", numerical.ptr());
  py::register_exception<ConditioningError>(m, "ConditioningError", numerical.ptr());
  py::register_exception<AmbiguousMatchingError>(m, "AmbiguousMatchingError", numerical.ptr());
  py::register_exception<SingularMapError>(m, "SingularMapError", numerical.ptr());
  py::register_exception<IntegrationError>(m, "IntegrationError", numerical.ptr());
  py::register_exception<InconsistentModeError>(m, "InconsistentModeError", config.ptr());

  py::class_<Schedule>(m, "Schedule")
      .def_static("constant", &Schedule::constant, py::arg("value"))
      .def_static("linear_ramp", &Schedule::linear_ramp, py::arg("base"), py::arg("rate"))
      .def_static("exponential", &Schedule::exponential, py::arg("base"), py::arg("rate"))
      .def_static("sinusoidal", &Schedule::sinusoidal, py::arg("base"), py::arg("amplitude"),
                  py::arg("frequency"), py::arg("phase") = 0.0)
      .def("__call__", [](const Schedule& s, double t) { return eval_schedule(s, t); })
      .def("derivative", [](const Schedule& s, double t) { return eval_schedule_derivative(s, t); });

  py::class_<BiorthogonalFrame>(m, "BiorthogonalFrame")
      .def_readonly("t", &BiorthogonalFrame::t)
      .def_readonly("energies", &BiorthogonalFrame::energies)
      .def_readonly("right", &BiorthogonalFrame::right)
      .def_readonly("left", &BiorthogonalFrame::left)
      .def_readonly("raw_overlaps", &BiorthogonalFrame::raw_overlaps);

  m.def("build_hamiltonian",
        [](const std::string& family, const std::map<std::string, Complex>& params, double t, int dimension,
           std::uint64_t seed) { return build_hamiltonian(model_from(family, dimension, params, seed), t); },
        py::arg("family"), py::arg("params"), py::arg("t") = 0.0, py::arg("dimension") = 2, py::arg("seed") = 0,
        "H(t) for a built-in family with constant parameters.");

  m.def("eig_biorthogonal",
        [](const Matrix& h, const std::string& reality, double t) {
          return eig_biorthogonal(h, policy_from(reality), t);
        },
        py::arg("h"), py::arg("reality") = "assert", py::arg("t") = 0.0);
  m.def("track_continuity", &track_continuity, py::arg("prev"), py::arg("cur"));
  m.def("build_omega",
        [](const BiorthogonalFrame& frame, const std::vector<Complex>& mu) { return build_omega(frame, mu); },
        py::arg("frame"), py::arg("mu"));
  m.def("build_theta", &build_theta, py::arg("omega"));
  m.def("hermitize", &hermitize, py::arg("omega"), py::arg("h"));
  m.def("quasi_hermiticity_residual", &quasi_hermiticity_residual, py::arg("a"), py::arg("theta"));
  m.def("build_generator", &build_generator, py::arg("h"), py::arg("omega"), py::arg("omega_dot"));
  m.def("theta_inner", &theta_inner, py::arg("a"), py::arg("b"), py::arg("theta"));
  m.def("expectation",
        [](const Vector& phi, const Matrix& a, const Matrix& theta) {
          EvolutionState s;
          s.phi_right = phi;
          return expectation(s, a, theta);
        },
        py::arg("phi"), py::arg("a"), py::arg("theta"));

  m.def("run_scenario",
        [](const std::string& text) {
          const ScenarioConfig cfg = parse_scenario(text);
          RunReport report;
          {
            py::gil_scoped_release release;
            report = run(cfg);
          }
          return report_dict(report);
        },
        py::arg("document"), "Parse and run a scenario document (JSON text); returns the run report as a dict.");

  m.attr("__version__") = "0.1.0";
}
