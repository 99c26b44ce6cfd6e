#include "ebike/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ebike::sim {

using powersplit::YTilde;

namespace {
std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}
}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid scenario: " + join(problems)), problems_(std::move(problems)) {}

// --- motor --------------------------------------------------------------------

MotorModel MotorModel::defaults() {
  MotorModel m;
  m.command_power.reserve(YTilde::kMax);
  // Usable plateau power rises by 9.5 W per step with the default no-load
  // parameters: 16.875 W at Y~=1, 251.25 W at Y~=16.
  for (int y = YTilde::kMin; y <= YTilde::kMax; ++y) m.command_power.push_back(15.625 * y + 1.25);
  return m;
}

double MotorModel::free_speed(YTilde y) const {
  const double fraction = static_cast<double>(y.value() - YTilde::kMin) /
                          static_cast<double>(YTilde::kMax - YTilde::kMin);
  return free_speed_min + fraction * (free_speed_max - free_speed_min);
}

std::vector<std::string> MotorModel::problems(const powersplit::PowerSplitParams& p) const {
  std::vector<std::string> out;
  if (command_power.size() != static_cast<std::size_t>(YTilde::kMax)) {
    out.push_back("motor table needs 16 entries, has " + std::to_string(command_power.size()));
    return out;
  }
  for (std::size_t i = 1; i < command_power.size(); ++i)
    if (!(command_power[i] > command_power[i - 1]))
      out.push_back("motor table must be strictly increasing at Y~=" + std::to_string(i + 1));
  if (command_power.back() > rated_power * (1.0 + rated_tolerance))
    out.push_back("motor table exceeds the rated power");
  for (int y = YTilde::kMin; y <= YTilde::kMax; ++y) {
    const double noload_electrical = p.noload_power(YTilde(y)) / p.motor_efficiency;
    if (command_power[static_cast<std::size_t>(y - 1)] < noload_electrical)
      out.push_back("motor table is below the no-load power at Y~=" + std::to_string(y));
  }
  if (!(free_speed_min > 0.0 && free_speed_max >= free_speed_min))
    out.push_back("motor free speeds must be positive and non-decreasing");
  if (!(taper_width > 0.0)) out.push_back("motor taper_width must be > 0");
  return out;
}

double command_to_electrical_power(YTilde y, const MotorModel& motor) {
  if (motor.command_power.size() != static_cast<std::size_t>(YTilde::kMax))
    throw CalibError("motor calibration table must cover Y~ = 1..16");
  return motor.command_power[static_cast<std::size_t>(y.value() - 1)];
}

double motor_demand(YTilde y, double speed_kmh, const MotorModel& motor,
                    const powersplit::PowerSplitParams& p) {
  const double plateau = command_to_electrical_power(y, motor);
  const double noload = p.noload_power(y) / p.motor_efficiency;
  const double headroom = (motor.free_speed(y) - speed_kmh) / motor.taper_width;
  if (headroom <= 0.0) return noload;
  return noload + (plateau - noload) * std::min(headroom, 1.0);
}

double motor_lag(double command, double previous, double dt, double time_constant) {
  return physio::lag_step(previous, command, dt, time_constant);
}

double battery_update(double amp_hours, double electrical_power, double voltage, double dt) {
  return std::max(amp_hours - electrical_power / voltage * dt / 3600.0, 0.0);
}

double rider_torque(const RiderBehavior& b, double speed, double target_speed) {
  return std::clamp(b.feedforward_torque + b.torque_gain * (target_speed - speed), 0.0,
                    b.max_torque);
}

// --- config -------------------------------------------------------------------

std::vector<std::string> ScenarioConfig::problems() const {
  std::vector<std::string> out;
  auto check = [&](auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      out.emplace_back(e.what());
    }
  };
  check([&] { environment.validate(); });
  check([&] { mass.validate(); });
  check([&] { powersplit.validate(); });
  check([&] { controller.validate(); });
  check([&] { heart_rate.validate(); });
  check([&] { ventilation.validate(); });
  if (out.empty()) {
    auto motor_problems = motor.problems(powersplit);
    out.insert(out.end(), motor_problems.begin(), motor_problems.end());
  }
  auto route_problems = route::validate_route(route);
  out.insert(out.end(), route_problems.begin(), route_problems.end());

  if (sim.telemetry_rate != 1 && sim.telemetry_rate != 5)
    out.emplace_back("telemetry rate must be 1 or 5 Hz");
  if (sim.duration.has_value() == sim.laps.has_value())
    out.emplace_back("exactly one of sim.duration and sim.laps must be set");
  if (sim.duration && !(*sim.duration >= 0.0)) out.emplace_back("sim.duration must be >= 0");
  if (sim.laps && *sim.laps < 0) out.emplace_back("sim.laps must be >= 0");
  if (sim.substeps < 1) out.emplace_back("sim.substeps must be >= 1");
  if (!(sim.motor_lag >= 0.0)) out.emplace_back("sim.motor_lag must be >= 0");
  if (!(sim.speed_floor > 0.0)) out.emplace_back("sim.speed_floor must be > 0");
  if (!(sim.initial_speed >= 0.0)) out.emplace_back("sim.initial_speed must be >= 0");
  if (sim.initial_ytilde < 1 || sim.initial_ytilde > 16)
    out.emplace_back("sim.initial_ytilde must be within 1..16");

  const double dt = 1.0 / std::max(sim.telemetry_rate, 1);
  auto multiple_of_dt = [&](double period) {
    const double ratio = period / dt;
    return ratio >= 1.0 - 1e-9 && std::abs(ratio - std::round(ratio)) < 1e-9;
  };
  if (controller.sample_period > 0.0 && !multiple_of_dt(controller.sample_period))
    out.emplace_back("controller sample period must be a multiple of the telemetry period");
  if (heart_rate.sample_time > 0.0 && !multiple_of_dt(heart_rate.sample_time))
    out.emplace_back("heart-rate sample time must be a multiple of the telemetry period");

  if (!(rider.target_speed > 0.0)) out.emplace_back("rider.target_speed must be > 0");
  if (!(rider.feedforward_torque >= powersplit.torque_bias))
    out.emplace_back("rider.feedforward_torque must be >= the torque bias");
  if (!(rider.max_torque >= rider.feedforward_torque))
    out.emplace_back("rider.max_torque must be >= rider.feedforward_torque");
  if (!(rider.torque_gain >= 0.0)) out.emplace_back("rider.torque_gain must be >= 0");
  if (!(rider.torque_noise >= 0.0)) out.emplace_back("rider.torque_noise must be >= 0");
  if (!(rider.gear_ratio > 0.0 && rider.wheel_radius > 0.0))
    out.emplace_back("rider gear_ratio and wheel_radius must be > 0");
  if (!(rider.inputs.throttle_voltage >= 0.0 && rider.inputs.throttle_voltage <= 5.0))
    out.emplace_back("rider.throttle_voltage must be within 0..5 V");

  if (!(battery.capacity > 0.0)) out.emplace_back("battery.capacity must be > 0");
  if (!(battery.nominal_voltage > 0.0)) out.emplace_back("battery.nominal_voltage must be > 0");
  if (battery.initial && !(*battery.initial >= 0.0 && *battery.initial <= battery.capacity))
    out.emplace_back("battery.initial must be within [0, capacity]");

  if (mode == ControlMode::OpenLoop) {
    for (const auto& z : route.zones)
      if (!policy.contains(z.kind))
        out.push_back(std::string("open-loop policy has no entry for ") + route::to_string(z.kind));
    for (const auto& [kind, y] : policy)
      if (y < 1 || y > 16) out.emplace_back("open-loop policy values must be within 1..16");
  }
  return out;
}

void ScenarioConfig::validate() const {
  auto p = problems();
  if (!p.empty()) throw ConfigError(std::move(p));
}

std::size_t planned_ticks(const ScenarioConfig& cfg) {
  const double seconds = cfg.sim.duration ? *cfg.sim.duration : cfg.sim.max_duration;
  return static_cast<std::size_t>(std::llround(seconds * cfg.sim.telemetry_rate));
}

// --- simulator ----------------------------------------------------------------

Simulator::Simulator(ScenarioConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.sim.seed) {
  cfg_.validate();
  const double dt = cfg_.sim.dt();
  ticks_per_control_ = static_cast<int>(std::lround(cfg_.controller.sample_period / dt));
  ticks_per_hr_ = static_cast<int>(std::lround(cfg_.heart_rate.sample_time / dt));

  state_.speed = cfg_.sim.initial_speed;
  state_.battery = cfg_.battery.initial.value_or(cfg_.battery.capacity);
  state_.physio = physio::RiderPhysioState::initial(cfg_.heart_rate);
  state_.physio.ventilation =
      physio::ventilation_from_hr(state_.physio.heart_rate(), cfg_.ventilation);
  last_zone_ = cfg_.route.zone_index(0.0);
  state_.target_share = route::target_m(0.0, cfg_.route);

  const auto& start_zone = cfg_.route.zones[last_zone_];
  state_.controller.y_tilde = cfg_.mode == ControlMode::OpenLoop
                                  ? control::open_loop_command(start_zone.kind, cfg_.policy)
                                  : cfg_.sim.initial_ytilde;
  apply_request(powersplit::ytilde_to_y(YTilde(state_.controller.y_tilde)).value);
}

void Simulator::apply_request(int analytics_request) {
  state_.request = control::arbitrate(cfg_.rider.inputs, analytics_request);
  if (state_.request < powersplit::ControlInputY::kValidLow) {
    motor_y_.reset();
  } else if (state_.request > powersplit::ControlInputY::kValidHigh) {
    motor_y_ = YTilde(YTilde::kMax);
  } else {
    motor_y_ = powersplit::y_to_ytilde({state_.request});
  }
}

void Simulator::physics_substep(double h, double noise) {
  const auto& ps = cfg_.powersplit;
  const auto& env = cfg_.environment;
  const auto& mass = cfg_.mass;

  const double target = has_override_ ? target_override_.value_or(0.0)
                                      : kmh_to_ms(cfg_.rider.target_speed);
  double torque = (has_override_ && !target_override_)
                      ? 0.0
                      : rider_torque(cfg_.rider, state_.speed, target) + noise;
  torque = std::clamp(torque, 0.0, cfg_.rider.max_torque);
  const double cadence = cfg_.rider.cadence(std::max(state_.speed, cfg_.sim.speed_floor));

  double demand = 0.0;
  if (motor_y_ && state_.battery > 0.0)
    demand = motor_demand(*motor_y_, ms_to_kmh(state_.speed), cfg_.motor, ps);
  const double electrical = motor_lag(demand, state_.electrical_power, h, cfg_.sim.motor_lag);

  const double human = powersplit::human_wheel_power(torque, cadence, true, ps);
  const double motor =
      motor_y_ ? powersplit::motor_wheel_power(electrical, *motor_y_, ps) : 0.0;
  const auto split = powersplit::power_split(human, motor);

  const double drive = env.mechanical_efficiency * split.wheel_power /
                       std::max(state_.speed, cfg_.sim.speed_floor);
  const double accel = (drive - physics::resistive_force(state_.speed, mass, env)) / mass.total();

  state_.position += state_.speed * h;
  state_.speed = std::max(state_.speed + accel * h, 0.0);
  state_.torque = torque;
  state_.cadence = cadence;
  state_.electrical_power = electrical;
  state_.split = split;

  const double before = state_.battery;
  state_.battery =
      battery_update(state_.battery, electrical, cfg_.battery.nominal_voltage, h);
  if (before > 0.0 && state_.battery <= 0.0 && !battery_empty_logged_) {
    battery_empty_logged_ = true;
    events_.push_back("battery empty at t=" + std::to_string(state_.time + h) +
                      " s; motor power forced to 0");
  }
}

double Simulator::current_target_share(double dt) {
  const auto& zones = cfg_.route.zones;
  const std::size_t index = cfg_.route.zone_index(state_.position);
  if (index != last_zone_) {
    const auto& prev = zones[last_zone_];
    const auto& next = zones[index];
    if (prev.kind == route::ZoneKind::Transient) last_transient_duration_ = transient_time_;
    if (next.kind == route::ZoneKind::Transient) transient_time_ = 0.0;
    if (prev.kind == route::ZoneKind::Polluted && next.kind != route::ZoneKind::Transient &&
        prev.target_share && last_transient_duration_ > 0.0) {
      exit_active_ = true;
      exit_from_ = *prev.target_share;
      exit_elapsed_ = 0.0;
      exit_duration_ = last_transient_duration_;
    }
    last_zone_ = index;
  }
  if (zones[index].kind == route::ZoneKind::Transient) transient_time_ += dt;

  const double base = route::target_m(state_.position, cfg_.route);
  if (!exit_active_) return base;
  exit_elapsed_ += dt;
  if (exit_elapsed_ >= exit_duration_ || zones[index].kind != route::ZoneKind::NonPolluted) {
    exit_active_ = false;
    return base;
  }
  return exit_from_ + (base - exit_from_) * (exit_elapsed_ / exit_duration_);
}

LogRecord Simulator::step() {
  const double dt = cfg_.sim.dt();
  const double h = dt / static_cast<double>(cfg_.sim.substeps);
  const double noise = cfg_.rider.torque_noise > 0.0 ? cfg_.rider.torque_noise * noise_(rng_) : 0.0;

  for (int i = 0; i < cfg_.sim.substeps; ++i) physics_substep(h, noise);
  ++state_.tick;
  state_.time = static_cast<double>(state_.tick) * dt;

  const auto& zone = route::zone_at(state_.position, cfg_.route);
  state_.target_share = current_target_share(dt);

  // Physiology.
  const double pedal = powersplit::pedal_power(state_.torque, state_.cadence);
  hr_power_sum_ += cfg_.heart_rate_drive == HeartRateDrive::WheelPower
                       ? state_.split.human_wheel_power
                       : pedal;
  if (++hr_ticks_ == ticks_per_hr_) {
    physio::hr_step(state_.physio, hr_power_sum_ / hr_ticks_, cfg_.heart_rate);
    hr_power_sum_ = 0.0;
    hr_ticks_ = 0;
  }
  const double ve_target = physio::ventilation_from_hr(state_.physio.heart_rate(), cfg_.ventilation);
  state_.physio.ventilation =
      physio::lag_step(state_.physio.ventilation, ve_target, dt, cfg_.ventilation.lag);
  state_.physio.cumulative_dose +=
      physio::inhaled_dose_step(state_.physio.ventilation, zone.concentration, dt);

  // Control.
  auto& ctl = state_.controller;
  control::push_sample(ctl, state_.split.human_wheel_power, state_.split.motor_wheel_power,
                       cfg_.controller);
  const std::optional<double> smoothed = control::smoothed_split(ctl);
  std::optional<double> error;
  if (state_.tick % ticks_per_control_ == 0) {
    if (smoothed) error = control::tracking_error(state_.target_share, *smoothed);
    int next = ctl.y_tilde;
    switch (cfg_.mode) {
      case ControlMode::ClosedLoop: next = control::p_step(ctl, error, cfg_.controller); break;
      case ControlMode::OpenLoop:
        next = control::open_loop_command(zone.kind, cfg_.policy);
        ctl.y_tilde = next;
        ctl.last_error = error;
        break;
      case ControlMode::Fixed: ctl.last_error = error; break;
    }
    apply_request(powersplit::ytilde_to_y(YTilde(next)).value);
  }

  LogRecord r;
  r.t = state_.time;
  r.position = state_.position;
  r.zone = zone.kind;
  r.speed = state_.speed;
  r.torque = state_.torque;
  r.pedal_power = pedal;
  r.electrical_power = state_.electrical_power;
  r.human_wheel_power = state_.split.human_wheel_power;
  r.motor_wheel_power = state_.split.motor_wheel_power;
  if (state_.split.defined) r.share = state_.split.share;
  r.target_share = state_.target_share;
  r.smoothed_share = smoothed;
  r.error = error;
  r.y_tilde = ctl.y_tilde;
  r.request = state_.request;
  r.heart_rate = state_.physio.heart_rate();
  r.ventilation = state_.physio.ventilation;
  r.dose = state_.physio.cumulative_dose;
  r.battery = state_.battery;
  return r;
}

SessionLog run(const ScenarioConfig& cfg) {
  Simulator sim(cfg);
  SessionLog log;
  if (cfg.sim.duration) {
    const std::size_t ticks = planned_ticks(cfg);
    log.records.reserve(ticks);
    for (std::size_t i = 0; i < ticks; ++i) log.records.push_back(sim.step());
  } else {
    const double distance = *cfg.sim.laps * cfg.route.total_length();
    const std::size_t cap = planned_ticks(cfg);
    while (sim.state().position < distance && log.records.size() < cap)
      log.records.push_back(sim.step());
    if (sim.state().position < distance)
      log.events.push_back("stopped at max_duration before completing the laps");
  }
  log.events.insert(log.events.begin(), sim.events().begin(), sim.events().end());
  return log;
}

// --- sweep --------------------------------------------------------------------

std::vector<SweepRow> sweep_experiment(const ScenarioConfig& base, YTilde y,
                                       const SweepRamp& ramp, double power_noise,
                                       std::uint64_t seed) {
  ScenarioConfig cfg = base;
  cfg.mode = ControlMode::Fixed;
  cfg.sim.initial_ytilde = y.value();
  cfg.sim.initial_speed = 0.0;
  cfg.sim.duration = ramp.settle + ramp.duration;
  cfg.sim.laps.reset();
  cfg.environment.road_gradient = 0.0;
  cfg.environment.wind_speed = 0.0;
  cfg.rider.torque_noise = 0.0;
  cfg.rider.inputs = {};
  cfg.route = {};
  route::append_zone(cfg.route, route::ZoneKind::NonPolluted, 1000.0, 0.0, 1.0);

  Simulator sim(cfg);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double dt = cfg.sim.dt();
  const auto settle_ticks = static_cast<std::size_t>(std::llround(ramp.settle / dt));
  const auto ramp_ticks = static_cast<std::size_t>(std::llround(ramp.duration / dt));

  sim.set_target_speed(std::nullopt);
  for (std::size_t i = 0; i < settle_ticks; ++i) sim.step();

  std::vector<SweepRow> rows;
  rows.reserve(ramp_ticks);
  for (std::size_t i = 0; i < ramp_ticks; ++i) {
    const double fraction = static_cast<double>(i + 1) / static_cast<double>(ramp_ticks);
    const double cadence_rad = ramp.max_cadence * fraction * 2.0 * std::numbers::pi / 60.0;
    sim.set_target_speed(cadence_rad * cfg.rider.wheel_radius / cfg.rider.gear_ratio);
    const LogRecord r = sim.step();

    SweepRow row;
    row.y_tilde = y.value();
    row.wheel_speed = ms_to_kmh(r.speed);
    row.cadence = sim.state().cadence * 60.0 / (2.0 * std::numbers::pi);
    row.pedal_power = r.pedal_power;
    row.electrical_power = r.electrical_power;
    if (power_noise > 0.0) row.electrical_power += power_noise * noise(rng);
    row.human_wheel_power = r.human_wheel_power;
    row.motor_wheel_power = r.motor_wheel_power;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ebike::sim
