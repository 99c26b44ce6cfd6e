#pragma once

// Deterministic discrete-time session simulator. One telemetry tick per
// logged record; the controller runs every T_s and the heart-rate model
// every T_A on top of it.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebike/control.hpp"
#include "ebike/physics.hpp"
#include "ebike/physio.hpp"
#include "ebike/powersplit.hpp"
#include "ebike/route.hpp"

namespace ebike::sim {

inline double kmh_to_ms(double kmh) { return kmh / 3.6; }
inline double ms_to_kmh(double ms) { return ms * 3.6; }

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

class CalibError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Steady electrical power the motor controller delivers per Y~, tapering
// to the no-load level as the wheel approaches the free speed for that Y~.
struct MotorModel {
  std::vector<double> command_power;  // W, index Y~-1, 16 entries
  double free_speed_min = 26.0;       // km/h at Y~ = 1
  double free_speed_max = 32.0;       // km/h at Y~ = 16
  double taper_width = 5.0;           // km/h below the free speed
  double rated_power = 250.0;         // W
  double rated_tolerance = 0.05;      // fraction above rated accepted in the table

  static MotorModel defaults();
  double free_speed(powersplit::YTilde y) const;
  std::vector<std::string> problems(const powersplit::PowerSplitParams& p) const;
};

double command_to_electrical_power(powersplit::YTilde y, const MotorModel& motor);

// Electrical power drawn at wheel speed `speed_kmh`: the table level below
// the taper, the no-load level at and above the free speed.
double motor_demand(powersplit::YTilde y, double speed_kmh, const MotorModel& motor,
                    const powersplit::PowerSplitParams& p);

double motor_lag(double command, double previous, double dt, double time_constant);

double battery_update(double amp_hours, double electrical_power, double voltage, double dt);

struct RiderBehavior {
  double target_speed = 20.0;       // km/h
  double feedforward_torque = 50.0; // Nm, >= torque bias
  double torque_gain = 50.0;        // Nm per m/s of speed error
  double max_torque = 120.0;        // Nm
  double torque_noise = 0.0;        // Nm standard deviation per tick
  double gear_ratio = 0.45;         // crank revolutions per wheel revolution
  double wheel_radius = 0.35;       // m
  control::RiderInputs inputs;

  double cadence(double speed) const { return speed * gear_ratio / wheel_radius; }
};

double rider_torque(const RiderBehavior& behavior, double speed, double target_speed);

struct BatteryParams {
  double capacity = 7.8;          // Ah
  double nominal_voltage = 36.0;  // V
  std::optional<double> initial;  // Ah, defaults to capacity
};

enum class ControlMode { ClosedLoop, OpenLoop, Fixed };
enum class HeartRateDrive { WheelPower, PedalPower };

struct SimParams {
  int telemetry_rate = 5;  // Hz
  std::optional<double> duration;  // s
  std::optional<int> laps;
  double max_duration = 7200.0;  // s, cap when running by laps
  double motor_lag = 0.3;        // s
  int substeps = 1;              // physics steps per telemetry tick
  double speed_floor = 0.5;      // m/s
  double initial_speed = 0.0;    // m/s
  int initial_ytilde = 1;
  std::uint64_t seed = 0;

  double dt() const { return 1.0 / static_cast<double>(telemetry_rate); }
};

struct ScenarioConfig {
  physics::EnvironmentParams environment;
  physics::MassParams mass;
  powersplit::PowerSplitParams powersplit;
  MotorModel motor = MotorModel::defaults();
  control::ControllerConfig controller;
  ControlMode mode = ControlMode::ClosedLoop;
  control::OpenLoopPolicy policy;
  route::Route route;
  RiderBehavior rider;
  physio::HeartRateParams heart_rate;
  physio::VentilationCalibration ventilation;
  HeartRateDrive heart_rate_drive = HeartRateDrive::WheelPower;
  BatteryParams battery;
  SimParams sim;

  // Every violated invariant, empty when the scenario can run.
  std::vector<std::string> problems() const;
  void validate() const;  // throws ConfigError
};

struct LogRecord {
  double t = 0.0;
  double position = 0.0;
  route::ZoneKind zone = route::ZoneKind::NonPolluted;
  double speed = 0.0;  // m/s
  double torque = 0.0;
  double pedal_power = 0.0;
  double electrical_power = 0.0;
  double human_wheel_power = 0.0;
  double motor_wheel_power = 0.0;
  std::optional<double> share;
  double target_share = 0.0;
  std::optional<double> smoothed_share;
  std::optional<double> error;  // only on controller ticks
  int y_tilde = 1;
  int request = 0;
  double heart_rate = 0.0;
  double ventilation = 0.0;
  double dose = 0.0;
  double battery = 0.0;  // Ah

  bool operator==(const LogRecord&) const = default;
};

struct SessionLog {
  std::vector<LogRecord> records;
  std::vector<std::string> events;

  bool operator==(const SessionLog&) const = default;
};

struct SimState {
  std::int64_t tick = 0;
  double time = 0.0;
  double position = 0.0;
  double speed = 0.0;
  double torque = 0.0;
  double cadence = 0.0;
  double electrical_power = 0.0;
  powersplit::PowerSplit split;
  control::ControllerState controller;
  physio::RiderPhysioState physio;
  double battery = 0.0;
  int request = 0;
  double target_share = 0.0;
};

class Simulator {
 public:
  explicit Simulator(ScenarioConfig cfg);  // validates, throws ConfigError

  // Advances one telemetry tick and returns its log record.
  LogRecord step();

  const SimState& state() const { return state_; }
  const ScenarioConfig& config() const { return cfg_; }
  const std::vector<std::string>& events() const { return events_; }

  // Overrides the rider's target speed (m/s); an empty value makes the
  // rider stop pedalling. Used by the trainer sweep.
  void set_target_speed(std::optional<double> speed) { target_override_ = speed; has_override_ = true; }

 private:
  void physics_substep(double h, double noise);
  double current_target_share(double dt);
  void apply_request(int analytics_request);

  ScenarioConfig cfg_;
  SimState state_;
  std::vector<std::string> events_;
  std::optional<powersplit::YTilde> motor_y_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};

  int ticks_per_control_ = 5;
  int ticks_per_hr_ = 5;
  double hr_power_sum_ = 0.0;
  int hr_ticks_ = 0;
  bool battery_empty_logged_ = false;

  bool has_override_ = false;
  std::optional<double> target_override_;

  // m* ramp after a polluted zone exits straight into a non-transient zone.
  std::size_t last_zone_ = 0;
  double transient_time_ = 0.0;
  double last_transient_duration_ = 0.0;
  double exit_from_ = 0.0;
  double exit_elapsed_ = 0.0;
  double exit_duration_ = 0.0;
  bool exit_active_ = false;
};

// Runs a validated scenario to completion. Identical configs produce
// bit-identical logs.
SessionLog run(const ScenarioConfig& cfg);

std::size_t planned_ticks(const ScenarioConfig& cfg);

// --- trainer sweep ----------------------------------------------------------

struct SweepRamp {
  double settle = 30.0;        // s of motor-only spin-up, not recorded
  double duration = 240.0;     // s of cadence ramp
  double max_cadence = 140.0;  // RPM at the end of the ramp
};

struct SweepRow {
  int y_tilde = 1;
  double wheel_speed = 0.0;  // km/h
  double cadence = 0.0;      // RPM
  double pedal_power = 0.0;
  double electrical_power = 0.0;
  double human_wheel_power = 0.0;
  double motor_wheel_power = 0.0;
};

// Fixed-Y~ run on a flat trainer while the rider's cadence target ramps
// from rest. `power_noise` adds Gaussian noise (W) to the reported
// electrical power column only.
std::vector<SweepRow> sweep_experiment(const ScenarioConfig& cfg, powersplit::YTilde y,
                                       const SweepRamp& ramp = {}, double power_noise = 0.0,
                                       std::uint64_t seed = 0);

// --- CSV --------------------------------------------------------------------

void write_log_csv(const SessionLog& log, std::ostream& out);
std::vector<LogRecord> read_log_csv(std::istream& in);  // throws std::runtime_error

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

}  // namespace ebike::sim
