#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "qhdyn/errors.hpp"
#include "test_util.hpp"

namespace qhdyn {
namespace {

std::string csv_of(const RunReport& report) {
  std::ostringstream out;
  write_csv(out, report);
  return out.str();
}

std::size_t column(const RunReport& report, const std::string& name) {
  for (std::size_t k = 0; k < report.columns.size(); ++k)
    if (report.columns[k] == name) return k;
  throw std::runtime_error("missing column " + name);
}

TEST(Scenario, MinimalDocumentGetsDefaults) {
  const auto cfg = parse_scenario(R"({
    "model": {"family": "pt2", "params": {"gamma": 0.2, "s": 1.0}},
    "mu": [1.0, 1.0],
    "time": {"t0": 0.0, "t1": 0.5, "dt": 0.01}
  })");
  EXPECT_EQ(cfg.time.steps(), 50u);
  EXPECT_EQ(cfg.initial_state.preset, InitialPreset::kUniform);
  EXPECT_EQ(cfg.generator, GeneratorChoice::kGenerator);
  EXPECT_TRUE(cfg.checks.empty());
  EXPECT_EQ(picture_of(cfg), Picture::kBoth);
}

TEST(Scenario, MissingKeyIsNamed) {
  try {
    parse_scenario(R"({"model": {"family": "pt2", "params": {"gamma": 0.2, "s": 1.0}},
                       "mu": [1.0, 1.0], "time": {"t0": 0.0, "t1": 1.0}})");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("time.dt"), std::string::npos) << e.what();
  }
}

TEST(Scenario, RejectsInvalidDocuments) {
  EXPECT_THROW(testing::load_scenario("failing/vanishing_mu.json"), ConfigError);
  auto doc = testing::load_json("exp_metric_drive.json");
  auto bad = doc;
  bad["mu"] = {1.0};
  EXPECT_THROW(scenario_from_json(bad), ConfigError);
  bad = doc;
  bad["time"]["dt"] = -0.1;
  EXPECT_THROW(scenario_from_json(bad), ConfigError);
  bad = doc;
  bad["time"]["dt"] = 0.3;
  EXPECT_THROW(scenario_from_json(bad), ConfigError);
  bad = doc;
  bad["checks"] = {"no-such-check"};
  EXPECT_THROW(scenario_from_json(bad), ConfigError);
  bad = doc;
  bad["model"]["family"] = "quartic";
  EXPECT_THROW(scenario_from_json(bad), ConfigError);
  EXPECT_THROW(parse_scenario("{not json"), ConfigError);
}

TEST(Scenario, OverridesAndPaths) {
  const auto [key, value] = parse_override("time.dt=0.002");
  EXPECT_EQ(key, "time.dt");
  EXPECT_EQ(value, 0.002);
  EXPECT_EQ(parse_override("generator=hamiltonian").second, "hamiltonian");
  EXPECT_EQ(parse_loose_value("[1, 2]"), nlohmann::json::array({1, 2}));

  auto doc = testing::load_json("exp_metric_drive.json");
  set_json_path(doc, "mu.0.rate", 0.7);
  EXPECT_EQ(doc["mu"][0]["rate"], 0.7);
  set_json_path(doc, "model.params.e2", 3.0);
  EXPECT_EQ(doc["model"]["params"]["e2"], 3.0);
  EXPECT_THROW(set_json_path(doc, "nowhere.deep.key", 1.0), ConfigError);
  EXPECT_THROW(set_json_path(doc, "mu.7.rate", 1.0), ConfigError);
}

TEST(Scenario, StaticHermitianGeneratorEqualsHamiltonian) {
  const auto report = run(testing::load_scenario("static_hermitian.json"));
  ASSERT_EQ(report.exit_code, ExitCode::kSuccess) << report.error.value_or("");
  const auto h = column(report, "hamiltonian_re");
  const auto g = column(report, "generator_re");
  const auto dev = column(report, "generator_deviation");
  for (const auto& row : report.rows) {
    EXPECT_EQ(row[h], row[g]);
    EXPECT_EQ(row[dev], 0.0);
  }
}

TEST(Scenario, DressedRunShowsDriftingEuclideanNorm) {
  const auto report = run(testing::load_scenario("exp_metric_drive.json"));
  ASSERT_TRUE(report.passed());
  EXPECT_EQ(report.rows.size(), 1001u);
  const auto theta = column(report, "theta_norm");
  const auto std_norm = column(report, "std_norm");
  EXPECT_GT(std::abs(report.rows.back()[std_norm] - report.rows.front()[std_norm]), 1e-2);
  for (const auto& row : report.rows) EXPECT_LT(std::abs(row[theta] - 1.0), 1e-8);
}

TEST(Scenario, DomainErrorsMapToExitCodes) {
  const auto ep = run(testing::load_scenario("failing/ep_crossing.json"));
  EXPECT_EQ(ep.exit_code, ExitCode::kNumericalDomain);
  ASSERT_TRUE(ep.error.has_value());
  EXPECT_NE(ep.error->find("exceptional point"), std::string::npos) << *ep.error;
  EXPECT_NE(ep.error->find("0.5"), std::string::npos) << *ep.error;
  EXPECT_EQ(run(testing::load_scenario("failing/metric_blowup.json")).exit_code, ExitCode::kNumericalDomain);

  auto doc = testing::load_json("exp_metric_drive.json");
  doc["generator"] = "hamiltonian";
  EXPECT_EQ(run(scenario_from_json(doc)).exit_code, ExitCode::kCheckFailure);
}

TEST(Scenario, CsvIsReproducible) {
  const auto cfg = testing::load_scenario("similarity_drive.json");
  const std::string first = csv_of(run(cfg));
  EXPECT_EQ(first, csv_of(run(cfg)));
  EXPECT_EQ(std::stod(format_number(0.1)), 0.1);
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Scenario, Sweeps) {
  const auto doc = testing::load_json("pt2_gamma_ramp.json");
  EXPECT_TRUE(sweep(doc, "time.dt", {}).empty());
  EXPECT_THROW(sweep(doc, "model.nothing.here", {1.0}), ConfigError);

  const std::vector<nlohmann::json> values{1.0, 1.2, 1.5};
  const auto serial = sweep(doc, "model.params.s", values, 1);
  const auto parallel = sweep(doc, "model.params.s", values, 3);
  ASSERT_EQ(serial.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(serial[k].value, values[k]);
    EXPECT_EQ(serial[k].report.exit_code, parallel[k].report.exit_code);
    EXPECT_EQ(csv_of(serial[k].report), csv_of(parallel[k].report));
  }

  std::ostringstream summary;
  write_sweep_summary(summary, sweep(doc, "time.dt", {0.002, 0.001}, 2));
  EXPECT_NE(summary.str().find("theta-norm-conservation"), std::string::npos);
}

}  // namespace
}  // namespace qhdyn
