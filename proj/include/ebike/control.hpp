#pragma once

// Human-share regulation: open-loop zone policy, the proportional controller
// on the smoothed share, and brake > throttle > analytics arbitration.

#include <deque>
#include <map>
#include <optional>
#include <stdexcept>

#include "ebike/route.hpp"

namespace ebike::control {

struct ControllerConfig {
  double gain = 20.0;          // gamma
  double sample_period = 1.0;  // T_s, s
  int human_window = 20;       // n_h samples
  int motor_window = 5;        // n_m samples
  double tolerance = 0.05;     // b, deadband on |e|
  int ytilde_min = 1;
  int ytilde_max = 16;

  void validate() const;
};

struct ControllerState {
  int y_tilde = 1;
  std::deque<double> human_buffer;
  std::deque<double> motor_buffer;
  std::optional<double> last_error;
};

// Appends one telemetry sample to both windows, dropping the oldest values.
void push_sample(ControllerState& state, double human_wheel_power,
                 double motor_wheel_power, const ControllerConfig& cfg);

class NotWarmedUp : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Mean human power over mean total power. Empty optional when both means are
// zero. Throws NotWarmedUp while either window is empty.
std::optional<double> smoothed_split(const ControllerState& state);

double tracking_error(double target_share, double smoothed_share);

// One controller update. An empty `error` (undefined share) or |e| <= b
// holds the current request; otherwise y - gamma e is rounded and clamped.
int p_step(ControllerState& state, std::optional<double> error, const ControllerConfig& cfg);

class PolicyError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

using OpenLoopPolicy = std::map<route::ZoneKind, int>;

int open_loop_command(route::ZoneKind zone, const OpenLoopPolicy& policy);

struct RiderInputs {
  bool left_brake = false;
  bool right_brake = false;
  double throttle_voltage = 0.0;  // V, active range 1-4
};

inline constexpr double kThrottleActiveVolts = 1.0;

// Linear map of 1-4 V onto 0-255, clamped, rounded half away from zero.
int throttle_to_request(double voltage);

// Final 0-255 motor request: any brake forces 0, an active throttle
// overrides analytics, otherwise the analytics request passes through.
int arbitrate(const RiderInputs& inputs, int analytics_request);

}  // namespace ebike::control
