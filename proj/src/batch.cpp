#include "ebike/batch.hpp"

#include <exception>

#include <omp.h>

namespace ebike::batch {

namespace {

template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& body) {
  std::vector<std::exception_ptr> failures(n);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      failures[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
}

std::vector<sim::SweepRow> concat(std::vector<std::vector<sim::SweepRow>>&& parts) {
  std::vector<sim::SweepRow> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

std::vector<sim::SessionLog> run_serial(const std::vector<sim::ScenarioConfig>& configs) {
  std::vector<sim::SessionLog> logs;
  logs.reserve(configs.size());
  for (const auto& c : configs) logs.push_back(sim::run(c));
  return logs;
}

std::vector<sim::SessionLog> run_parallel(const std::vector<sim::ScenarioConfig>& configs, int jobs) {
  std::vector<sim::SessionLog> logs(configs.size());
  parallel_for(configs.size(), jobs, [&](std::size_t i) { logs[i] = sim::run(configs[i]); });
  return logs;
}

std::vector<sim::SweepRow> sweep_serial(const sim::ScenarioConfig& cfg, const std::vector<int>& y_tildes,
                                        const sim::SweepRamp& ramp, double power_noise,
                                        std::uint64_t seed) {
  std::vector<std::vector<sim::SweepRow>> parts;
  for (std::size_t i = 0; i < y_tildes.size(); ++i)
    parts.push_back(sim::sweep_experiment(cfg, powersplit::YTilde(y_tildes[i]), ramp, power_noise, seed + i));
  return concat(std::move(parts));
}

std::vector<sim::SweepRow> sweep_parallel(const sim::ScenarioConfig& cfg, const std::vector<int>& y_tildes,
                                          const sim::SweepRamp& ramp, double power_noise,
                                          std::uint64_t seed, int jobs) {
  std::vector<std::vector<sim::SweepRow>> parts(y_tildes.size());
  parallel_for(y_tildes.size(), jobs, [&](std::size_t i) {
    parts[i] = sim::sweep_experiment(cfg, powersplit::YTilde(y_tildes[i]), ramp, power_noise, seed + i);
  });
  return concat(std::move(parts));
}

}  // namespace ebike::batch
