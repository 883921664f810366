// Deterministic text output for artifacts: shortest round-trip double
// formatting, CSV writers, and JSON reports. Identical inputs always produce
// byte-identical text.
#pragma once

#include <string>

#include <json.hpp>

#include "igames/repeated_game.hpp"
#include "igames/sequential_games.hpp"
#include "igames/static_games.hpp"
#include "igames/two_sided.hpp"

namespace igames {

// Shortest decimal string that round-trips to the same double ('.' decimal
// separator, "inf"/"-inf"/"nan" spelled out).
std::string format_double(double x);

std::string br_trajectory_csv(const BrTrajectory& traj);
std::string simulation_trace_csv(const SimulationTrace& trace);

nlohmann::json to_json(const SbgiEquilibrium& eq);
nlohmann::json to_json(const SbgiEEquilibrium& eq);
nlohmann::json to_json(const TwoSidedEquilibrium& eq);
nlohmann::json to_json(const BgiVerification& v, const GameParams& params);
nlohmann::json trace_summary_json(const SimulationTrace& trace);

}  // namespace igames
