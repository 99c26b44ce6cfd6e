#include "ebike/control.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ebike::control {

void ControllerConfig::validate() const {
  if (!(gain > 0.0)) throw std::invalid_argument("controller gain must be > 0");
  if (!(sample_period > 0.0)) throw std::invalid_argument("sample_period must be > 0");
  if (human_window < 1) throw std::invalid_argument("human_window must be >= 1");
  if (motor_window < 1) throw std::invalid_argument("motor_window must be >= 1");
  if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
  if (ytilde_min < 1 || ytilde_max > 16 || ytilde_min > ytilde_max)
    throw std::invalid_argument("controller output bounds must lie within 1..16");
}

void push_sample(ControllerState& state, double human, double motor,
                 const ControllerConfig& cfg) {
  state.human_buffer.push_back(human);
  while (state.human_buffer.size() > static_cast<std::size_t>(cfg.human_window))
    state.human_buffer.pop_front();
  state.motor_buffer.push_back(motor);
  while (state.motor_buffer.size() > static_cast<std::size_t>(cfg.motor_window))
    state.motor_buffer.pop_front();
}

namespace {
double mean(const std::deque<double>& values) {
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}
}  // namespace

std::optional<double> smoothed_split(const ControllerState& state) {
  if (state.human_buffer.empty() || state.motor_buffer.empty())
    throw NotWarmedUp("smoothing windows are empty");
  const double human = mean(state.human_buffer);
  const double total = human + mean(state.motor_buffer);
  if (total == 0.0) return std::nullopt;
  return human / total;
}

double tracking_error(double target_share, double smoothed_share) {
  return target_share - smoothed_share;
}

int p_step(ControllerState& state, std::optional<double> error, const ControllerConfig& cfg) {
  state.last_error = error;
  if (!error || std::abs(*error) <= cfg.tolerance) return state.y_tilde;
  const double raw = static_cast<double>(state.y_tilde) - cfg.gain * *error;
  const double bounded = std::clamp(std::round(raw), static_cast<double>(cfg.ytilde_min),
                                    static_cast<double>(cfg.ytilde_max));
  state.y_tilde = static_cast<int>(bounded);
  return state.y_tilde;
}

int open_loop_command(route::ZoneKind zone, const OpenLoopPolicy& policy) {
  auto it = policy.find(zone);
  if (it == policy.end())
    throw PolicyError(std::string("open-loop policy has no entry for zone ") +
                      route::to_string(zone));
  return it->second;
}

int throttle_to_request(double voltage) {
  const double scaled = (voltage - kThrottleActiveVolts) / 3.0 * 255.0;
  return static_cast<int>(std::lround(std::clamp(scaled, 0.0, 255.0)));
}

int arbitrate(const RiderInputs& inputs, int analytics_request) {
  if (inputs.left_brake || inputs.right_brake) return 0;
  if (inputs.throttle_voltage > kThrottleActiveVolts)
    return throttle_to_request(inputs.throttle_voltage);
  return std::clamp(analytics_request, 0, 255);
}

}  // namespace ebike::control
