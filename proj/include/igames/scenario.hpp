// Scenario files: a flat INI-style key = value format (grouped into typed
// sections) describing one solver run. Parsing collects every error rather
// than stopping at the first; running a scenario writes deterministic CSV and
// JSON artifacts into an output directory.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "igames/core_model.hpp"
#include "igames/gain_distributions.hpp"
#include "igames/static_games.hpp"

namespace igames {

enum class Mode { static_br, bgi_verify, sbgi, sbgie, two_sided, repeated, sweep };

const char* to_label(Mode m);
std::optional<Mode> mode_from_label(std::string_view s);

struct SweepSpec {
  Mode inner = Mode::sbgi;  // sbgi, sbgie or repeated
  std::string variable;     // one of P, N0, k, g12, g21, T
  double from = 0.0, to = 0.0;
  int points = 2;
  bool log_scale = false;
};

struct Scenario {
  Mode mode = Mode::sbgi;
  GameParams game;
  RngSeed seed;
  std::optional<double> g12, g21;
  std::optional<GainDistribution> prior_g11, prior_g12, prior_g21, prior_g22;
  // repeated
  int horizon = 1;
  // static_br (init defaults resolve to (P, 0) at run time)
  std::optional<double> init1, init2;
  int max_iter = 100;
  double br_tol = 1e-6;
  UpdateRule update = UpdateRule::simultaneous;
  // bgi_verify
  std::string candidate = "spread";  // "spread" or "concentrate:<k>"
  int n_check = 1000;
  // two_sided
  double damping = 0.5;
  double ts_tol = 1e-10;
  int ts_max_iter = 200;
  bool grid_scan = false;
  // numeric overrides
  int quad_order = 32;
  std::size_t mc_n = 100000;
  std::optional<SweepSpec> sweep;
};

struct ParseResult {
  std::optional<Scenario> scenario;  // present iff errors is empty
  std::vector<std::string> errors;   // "section.key: message" entries
};

// Parses and validates scenario text, reporting every problem found.
ParseResult parse_scenario(std::string_view text);

// Canonical text for a scenario; parse_scenario(scenario_to_text(s)) yields
// an equivalent scenario.
std::string scenario_to_text(const Scenario& s);

// Distribution literals: uniform(lo,hi), truncexp(rate,lo,hi) with hi
// possibly inf, point(v), discrete(v1:w1,v2:w2,...).
std::optional<GainDistribution> parse_distribution(std::string_view text,
                                                   std::string* error);
std::string distribution_to_text(const GainDistribution& d);

enum class RunStatus { ok, invalid, not_converged };

struct RunResult {
  RunStatus status = RunStatus::ok;
  std::vector<std::string> errors;   // populated when status != ok
  std::vector<std::string> outputs;  // artifact paths written
  std::string report_text;           // human-readable run summary
  double wall_seconds = 0.0;
};

// Executes the scenario, writing artifacts under out_dir (created if needed).
// Identical scenario + seed produce byte-identical artifacts; the wall time
// appears only in report_text, never in artifacts.
RunResult run_scenario(const Scenario& s, const std::filesystem::path& out_dir);

}  // namespace igames
