#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "ebike/batch.hpp"
#include "ebike/report.hpp"
#include "ebike/scenario.hpp"
#include "ebike/sim.hpp"
#include "ebike/telemetry.hpp"

namespace {

using namespace ebike;

// Raised for anything the user can fix: bad paths, bad inputs.
struct UserError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UserError("cannot write " + path);
  return out;
}

sim::ScenarioConfig load_scenario(const std::string& path, std::optional<std::uint64_t> seed) {
  if (!std::filesystem::exists(path)) throw UserError("scenario file not found: " + path);
  auto cfg = scenario::load(path);
  if (seed) cfg.sim.seed = *seed;
  cfg.validate();
  return cfg;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_path,
                 std::optional<std::uint64_t> seed) {
  const auto cfg = load_scenario(scenario_path, seed);
  const auto log = sim::run(cfg);
  auto out = open_out(out_path);
  sim::write_log_csv(log, out);
  const auto& last = log.records.empty() ? sim::LogRecord{} : log.records.back();
  std::cout << log.records.size() << " records, " << last.t << " s, " << last.position
            << " m, dose " << last.dose << " ug -> " << out_path << '\n';
  for (const auto& e : log.events) std::cout << "event: " << e << '\n';
  return 0;
}

int cmd_report(const std::string& log_path, const std::string& out_path, double warmup) {
  auto in = open_in(log_path);
  const auto records = sim::read_log_csv(in);
  const auto summary = report::summarize(records, warmup);
  report::print_summary(summary, std::cout);
  if (!out_path.empty()) {
    auto out = open_out(out_path);
    report::write_summary_csv(summary, out);
  }
  return 0;
}

std::vector<sim::SweepRow> read_sweep(const std::string& path) {
  auto in = open_in(path);
  return sim::read_sweep_csv(in);
}

int cmd_fit_noload(const std::string& sweep_path, double efficiency, double tolerance) {
  const auto rows = read_sweep(sweep_path);
  std::vector<powersplit::NoloadSample> samples;
  for (const auto& r : rows)
    if (r.motor_wheel_power <= tolerance && r.human_wheel_power > 0.0)
      samples.push_back({static_cast<double>(r.y_tilde), r.electrical_power});
  const auto fit = powersplit::fit_noload_params(samples, efficiency);
  std::cout << "beta1 = " << fit.slope << "\nbeta2 = " << fit.intercept
            << "\nresidual_rms = " << fit.residual_rms << " W (" << samples.size()
            << " no-load rows)\n";
  return 0;
}

int cmd_sectors(const std::string& sweep_path) {
  const auto rows = read_sweep(sweep_path);
  std::map<int, std::vector<powersplit::SweepPoint>> by_y;
  for (const auto& r : rows)
    by_y[r.y_tilde].push_back({r.wheel_speed, r.human_wheel_power, r.motor_wheel_power});
  if (by_y.empty()) throw UserError("sweep has no rows");
  std::cout << "y_tilde,S1,S2\n";
  for (auto& [y, pts] : by_y) {
    std::stable_sort(pts.begin(), pts.end(),
                     [](const auto& a, const auto& b) { return a.wheel_speed < b.wheel_speed; });
    const auto b = powersplit::sector_bounds(pts);
    std::cout << y << ',' << b.s1 << ',' << b.s2 << '\n';
  }
  return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::vector<int>& y_tildes,
              const std::string& out_path, double noise, std::uint64_t seed, int jobs) {
  const auto cfg = scenario_path.empty() ? scenario::trainer() : load_scenario(scenario_path, std::nullopt);
  const auto rows = batch::sweep_parallel(cfg, y_tildes, {}, noise, seed, jobs);
  auto out = open_out(out_path);
  sim::write_sweep_csv(rows, out);
  std::cout << rows.size() << " rows for " << y_tildes.size() << " Y~ values -> " << out_path << '\n';
  return 0;
}

int cmd_replay(const std::string& frames_path) {
  auto in = open_in(frames_path);
  std::size_t ok = 0;
  std::map<telemetry::FrameErrorKind, std::size_t> errors;
  std::string line;
  double t = 0.0;
  while (std::getline(in, line)) {
    try {
      telemetry::parse_frame(line, t);
      ++ok;
    } catch (const telemetry::FrameError& e) {
      ++errors[e.kind()];
    }
    t += 1.0;
  }
  std::cout << ok << " ok";
  if (errors.empty()) std::cout << ", 0 errors";
  for (const auto& [kind, n] : errors) std::cout << ", " << n << ' ' << telemetry::to_string(kind);
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"E-bike power-split simulator and analysis tools"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, log_path, sweep_path, frames_path;
  std::optional<std::uint64_t> seed;
  double warmup = 30.0;
  double efficiency = 0.8;
  double tolerance = 1e-9;
  double noise = 0.0;
  std::uint64_t sweep_seed = 0;
  int jobs = 0;
  std::vector<int> y_tildes{2, 6, 10, 14};

  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write its session log CSV");
  simulate->add_option("--scenario", scenario_path, "Scenario file")->required();
  simulate->add_option("--out", out_path, "Session log CSV")->required();
  simulate->add_option("--seed", seed, "Override the scenario seed");

  auto* rep = app.add_subcommand("report", "Summarize a session log");
  rep->add_option("--log", log_path, "Session log CSV")->required();
  rep->add_option("--out", out_path, "Summary CSV");
  rep->add_option("--warmup", warmup, "Seconds excluded from error statistics");

  auto* fit = app.add_subcommand("fit-noload", "Least-squares no-load power fit from a sweep");
  fit->add_option("--sweep", sweep_path, "Sweep CSV")->required();
  fit->add_option("--motor-efficiency", efficiency, "Motor efficiency");
  fit->add_option("--tolerance", tolerance, "Motor wheel power counted as free-wheeling (W)");

  auto* sectors = app.add_subcommand("sectors", "Sector boundaries per Y~ from a sweep");
  sectors->add_option("--sweep", sweep_path, "Sweep CSV")->required();

  auto* sweep = app.add_subcommand("sweep", "Generate trainer sweeps at fixed Y~ values");
  sweep->add_option("--scenario", scenario_path, "Scenario file (default: built-in trainer)");
  sweep->add_option("--y-tilde", y_tildes, "Y~ values")->delimiter(',');
  sweep->add_option("--out", out_path, "Sweep CSV")->required();
  sweep->add_option("--noise", noise, "Gaussian noise on P_Me (W)");
  sweep->add_option("--seed", sweep_seed, "Noise seed");
  sweep->add_option("--jobs", jobs, "Worker threads (0: all)");

  auto* replay = app.add_subcommand("replay", "Parse a telemetry frame log and count errors");
  replay->add_option("--frames", frames_path, "Newline-delimited frames")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*simulate) return cmd_simulate(scenario_path, out_path, seed);
    if (*rep) return cmd_report(log_path, out_path, warmup);
    if (*fit) return cmd_fit_noload(sweep_path, efficiency, tolerance);
    if (*sectors) return cmd_sectors(sweep_path);
    if (*sweep) return cmd_sweep(scenario_path, y_tildes, out_path, noise, sweep_seed, jobs);
    if (*replay) return cmd_replay(frames_path);
  } catch (const sim::ConfigError& e) {
    std::cerr << "error: invalid scenario\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << '\n';
    return 1;
  } catch (const std::logic_error& e) {
    // YTilde and similar domain checks on user-supplied values land here too.
    if (dynamic_cast<const std::domain_error*>(&e) || dynamic_cast<const std::invalid_argument*>(&e)) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
