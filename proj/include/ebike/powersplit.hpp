#pragma once

// Static energy model of the e-bike drive: the motor request mapping, the
// human and motor wheel-power approximations, the human share m, sector
// boundaries and the no-load least-squares fit.

#include <span>
#include <stdexcept>
#include <string>

namespace ebike::powersplit {

// Raw 0-255 request written to the motor controller's PWM input.
struct ControlInputY {
  int value = 0;

  static constexpr int kMin = 0;
  static constexpr int kMax = 255;
  static constexpr int kValidLow = 90;
  static constexpr int kValidHigh = 165;

  // True on 90..165; values outside are representable but the motor either
  // receives too little current or exceeds its rated power.
  bool in_operating_region() const { return value >= kValidLow && value <= kValidHigh; }
};

// Translated control input, always within 1..16.
class YTilde {
 public:
  static constexpr int kMin = 1;
  static constexpr int kMax = 16;

  // Throws std::domain_error outside 1..16.
  explicit YTilde(int value);

  int value() const { return value_; }
  friend bool operator==(YTilde, YTilde) = default;

 private:
  int value_;
};

enum class ControlInputErrorKind { InvalidLow, InvalidHigh };

class ControlInputError : public std::domain_error {
 public:
  ControlInputError(ControlInputErrorKind kind, const std::string& what)
      : std::domain_error(what), kind_(kind) {}
  ControlInputErrorKind kind() const { return kind_; }

 private:
  ControlInputErrorKind kind_;
};

// Rounds to the nearest grid point. Y < 90 -> InvalidLow, Y > 165 -> InvalidHigh.
YTilde y_to_ytilde(ControlInputY y);
ControlInputY ytilde_to_y(YTilde y_tilde);

struct PowerSplitParams {
  double torque_bias = 45.0;        // Nm
  double crank_efficiency = 0.90;
  double scaling = 1.5;
  double motor_efficiency = 0.80;
  double noload_slope = 3.0;        // W per Y~ unit
  double noload_intercept = 5.0;    // W

  void validate() const;
  // Y~ beta1 + beta2, the mechanical no-load loss at a given request.
  double noload_power(YTilde y_tilde) const {
    return y_tilde.value() * noload_slope + noload_intercept;
  }
};

double pedal_power(double torque, double cadence);

// `motor_active` mirrors the P_Me >= 0 guard. With the motor inactive the
// torque bias does not apply and the crankset drives the wheel directly.
double human_wheel_power(double torque, double cadence, bool motor_active,
                         const PowerSplitParams& p);

double motor_wheel_power(double electrical_power, YTilde y_tilde,
                         const PowerSplitParams& p);

double electrical_power(double battery_voltage, double motor_current);

struct PowerSplit {
  double human_wheel_power = 0.0;
  double motor_wheel_power = 0.0;
  double wheel_power = 0.0;
  double share = 0.0;  // m; meaningful only when `defined`
  bool defined = false;
};

PowerSplit power_split(double human_wheel_power, double motor_wheel_power);

// --- no-load fit -----------------------------------------------------------

struct NoloadSample {
  double y_tilde = 0.0;
  double electrical_power = 0.0;  // W at the motor's free-wheel point
};

struct NoloadFit {
  double slope = 0.0;      // beta1
  double intercept = 0.0;  // beta2
  double residual_rms = 0.0;  // in the units of the supplied power column
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ordinary least squares through (Y~, efficiency * P_Me). Residual RMS is
// reported back in electrical watts (divided by `efficiency`).
NoloadFit fit_noload_params(std::span<const NoloadSample> samples,
                            double efficiency);

// --- sectors -----------------------------------------------------------------

struct SectorBounds {
  double s1 = 0.0;  // km/h
  double s2 = 0.0;  // km/h
};

struct SweepPoint {
  double wheel_speed = 0.0;  // km/h
  double human_wheel_power = 0.0;
  double motor_wheel_power = 0.0;
};

class DegenerateSweep : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Motor wheel power at or below `zero_tolerance` counts as free-wheeling.
// The sweep must be sorted by wheel speed.
SectorBounds sector_bounds(std::span<const SweepPoint> sweep,
                           double zero_tolerance = 1e-9);

enum class Sector { HumanFreewheel, Shared, MotorFreewheel };

Sector classify_sector(double wheel_speed, const SectorBounds& bounds);
const char* to_string(Sector s);

}  // namespace ebike::powersplit
