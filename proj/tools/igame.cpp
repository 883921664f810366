#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "igames/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNotConverged = 3;

void print_error_json(const std::string& status,
                      const std::vector<std::string>& errors) {
  nlohmann::json j;
  j["status"] = status;
  j["errors"] = errors;
  std::cout << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solvers and simulators for two-user interference games"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  bool quiet = false;

  CLI::App* run = app.add_subcommand("run", "Run one scenario file");
  run->add_option("scenario", scenario_path, "Scenario file to run")
      ->required();
  run->add_option("--out", out_dir, "Directory for output artifacts");
  run->add_option("--seed", seed_override, "Override the scenario seed");
  run->add_flag("--quiet", quiet, "Suppress the run report");

  CLI11_PARSE(app, argc, argv);

  std::ifstream in(scenario_path, std::ios::binary);
  if (!in) {
    print_error_json("invalid", {"cannot read scenario file: " + scenario_path});
    return kExitValidation;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();

  const igames::ParseResult parsed = igames::parse_scenario(buffer.str());
  if (!parsed.scenario) {
    print_error_json("invalid", parsed.errors);
    return kExitValidation;
  }

  igames::Scenario scenario = *parsed.scenario;
  if (seed_override) scenario.seed.value = *seed_override;

  const igames::RunResult result = igames::run_scenario(scenario, out_dir);
  if (!quiet && !result.report_text.empty()) {
    std::cout << result.report_text;
  }
  switch (result.status) {
    case igames::RunStatus::ok:
      return kExitOk;
    case igames::RunStatus::invalid:
      print_error_json("invalid", result.errors);
      return kExitValidation;
    case igames::RunStatus::not_converged:
      print_error_json("not_converged", result.errors);
      return kExitNotConverged;
  }
  return kExitOk;
}
