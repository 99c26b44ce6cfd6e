#pragma once

// Scenario files: `[section]` headers, `key = value` lines, `#` comments.
// Sections: environment, mass, powersplit, controller, route, zone
// (repeated, one per zone in route order), rider, physio, battery, sim.
// Unknown sections or keys and duplicate keys are rejected.

#include <filesystem>
#include <iosfwd>

#include "ebike/sim.hpp"

namespace ebike::scenario {

// Throws sim::ConfigError listing every problem with its line number. The
// result is not validated; call ScenarioConfig::validate().
sim::ScenarioConfig parse(std::istream& in);
sim::ScenarioConfig load(const std::filesystem::path& path);

void write(const sim::ScenarioConfig& cfg, std::ostream& out);

// Two laps of the three-zone loop with the m* schedule 0.9 -> 0.3 -> 0.9,
// closed-loop control, 5 Hz telemetry.
sim::ScenarioConfig closed_loop_two_lap();

// The same closed-loop rider with m* fixed at 0.9 in every zone.
sim::ScenarioConfig closed_loop_constant_share(double share = 0.9);

// Open-loop zone policy at a constant 20 km/h: motor minimal in the clean
// zone, strong assistance from the transient zone onward.
sim::ScenarioConfig open_loop_zones();

// Flat trainer used for Y~ sweeps.
sim::ScenarioConfig trainer();

}  // namespace ebike::scenario
