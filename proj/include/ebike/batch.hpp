#pragma once

// Independent scenario runs and Y~ sweeps fanned out over OpenMP threads.
// Each item owns its simulator and RNG, so the parallel results are
// bit-identical to the serial reference in the same order.

#include <cstdint>
#include <vector>

#include "ebike/sim.hpp"

namespace ebike::batch {

std::vector<sim::SessionLog> run_serial(const std::vector<sim::ScenarioConfig>& configs);

// jobs <= 0 uses the OpenMP default thread count. The first failing item's
// exception is rethrown after all threads finish.
std::vector<sim::SessionLog> run_parallel(const std::vector<sim::ScenarioConfig>& configs, int jobs = 0);

// Sweep rows for every Y~, concatenated in the order given. Item i draws
// its noise from seed + i.
std::vector<sim::SweepRow> sweep_serial(const sim::ScenarioConfig& cfg, const std::vector<int>& y_tildes,
                                        const sim::SweepRamp& ramp = {}, double power_noise = 0.0,
                                        std::uint64_t seed = 0);

std::vector<sim::SweepRow> sweep_parallel(const sim::ScenarioConfig& cfg, const std::vector<int>& y_tildes,
                                          const sim::SweepRamp& ramp = {}, double power_noise = 0.0,
                                          std::uint64_t seed = 0, int jobs = 0);

}  // namespace ebike::batch
