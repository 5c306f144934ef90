// Command-line driver: runs scenario files and parameter sweeps, writes CSV
// time series, a plain-text summary and a JSON report per run.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qhdyn/errors.hpp"
#include "qhdyn/runner.hpp"
#include "qhdyn/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_document(const std::string& file, const std::vector<std::string>& overrides) {
  std::ifstream in(file);
  if (!in) throw qhdyn::ConfigError("cannot open scenario file '" + file + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc = json::parse(buffer.str(), nullptr, false, true);
  if (doc.is_discarded()) throw qhdyn::ConfigError("'" + file + "' is not valid JSON");
  for (const auto& o : overrides) {
    const auto [key, value] = qhdyn::parse_override(o);
    qhdyn::set_json_path(doc, key, value, true);
  }
  return doc;
}

std::vector<json> parse_values(const std::string& text) {
  std::vector<json> values;
  const json array = json::parse(text, nullptr, false);
  if (!array.is_discarded() && array.is_array()) {
    for (const auto& v : array) values.push_back(v);
    return values;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) values.push_back(qhdyn::parse_loose_value(item));
  }
  return values;
}

void write_outputs(const fs::path& dir, const std::string& stem, const qhdyn::RunReport& report) {
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / (stem + ".csv"));
    qhdyn::write_csv(csv, report);
  }
  {
    std::ofstream summary(dir / (stem + "_summary.txt"));
    qhdyn::write_summary(summary, report);
  }
  std::ofstream js(dir / (stem + "_report.json"));
  js << qhdyn::report_json(report).dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-dependent quasi-Hermitian evolution: metric-norm-preserving integration and invariant checks"};
  app.require_subcommand(1);

  std::string file;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  std::string param;
  std::string values_text;
  unsigned jobs = 1;

  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_cmd->add_option("file", file, "Scenario file (JSON)")->required();
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--override", overrides, "key=value, dotted path into the scenario (repeatable)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario for a list of parameter values");
  sweep_cmd->add_option("file", file, "Scenario file (JSON)")->required();
  sweep_cmd->add_option("--param", param, "Dotted path of the swept value")->required();
  sweep_cmd->add_option("--values", values_text, "Comma-separated values or a JSON array")->required();
  sweep_cmd->add_option("--out", out_dir, "Output directory");
  sweep_cmd->add_option("--override", overrides, "key=value applied before sweeping (repeatable)");
  sweep_cmd->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(qhdyn::ExitCode::kConfigError);
  }

  try {
    const json doc = load_document(file, overrides);
    if (*run_cmd) {
      const qhdyn::ScenarioConfig config = qhdyn::scenario_from_json(doc);
      const qhdyn::RunReport report = qhdyn::run(config);
      write_outputs(out_dir, config.name, report);
      qhdyn::write_summary(std::cout, report);
      if (report.error) std::cerr << "error: " << *report.error << '\n';
      return static_cast<int>(report.exit_code);
    }

    const auto points = qhdyn::sweep(doc, param, parse_values(values_text), jobs);
    int worst = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& r = points[i].report;
      write_outputs(out_dir, r.scenario_name + "_" + std::to_string(i), r);
      worst = std::max(worst, static_cast<int>(r.exit_code));
      if (r.error) std::cerr << "point " << i << ": " << *r.error << '\n';
    }
    fs::create_directories(out_dir);
    std::ofstream summary(fs::path(out_dir) / "sweep_summary.csv");
    qhdyn::write_sweep_summary(summary, points);
    qhdyn::write_sweep_summary(std::cout, points);
    return worst;
  } catch (const qhdyn::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  }
}
