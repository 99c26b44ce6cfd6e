#include "ebike/powersplit.hpp"

#include <algorithm>
#include <cmath>

namespace ebike::powersplit {

YTilde::YTilde(int value) : value_(value) {
  if (value < kMin || value > kMax)
    throw std::domain_error("Y~ must be within 1..16, got " + std::to_string(value));
}

YTilde y_to_ytilde(ControlInputY y) {
  if (y.value < ControlInputY::kValidLow)
    throw ControlInputError(ControlInputErrorKind::InvalidLow,
                            "current provided to motor is too small (Y=" +
                                std::to_string(y.value) + ")");
  if (y.value > ControlInputY::kValidHigh)
    throw ControlInputError(ControlInputErrorKind::InvalidHigh,
                            "request exceeds motor rated power (Y=" +
                                std::to_string(y.value) + ")");
  // (Y - 85) / 5 rounded to nearest; Y is an integer so no ties occur.
  const int rounded = (y.value - 85 + 2) / 5;
  return YTilde(std::clamp(rounded, YTilde::kMin, YTilde::kMax));
}

ControlInputY ytilde_to_y(YTilde y_tilde) { return {5 * (y_tilde.value() + 17)}; }

void PowerSplitParams::validate() const {
  if (!(torque_bias >= 0.0)) throw std::invalid_argument("torque_bias must be >= 0");
  if (!(crank_efficiency > 0.0 && crank_efficiency <= 1.0))
    throw std::invalid_argument("crank_efficiency must be in (0, 1]");
  if (!(motor_efficiency > 0.0 && motor_efficiency <= 1.0))
    throw std::invalid_argument("motor_efficiency must be in (0, 1]");
  if (!(scaling > 0.0)) throw std::invalid_argument("scaling must be > 0");
  if (!(noload_slope >= 0.0)) throw std::invalid_argument("noload_slope must be >= 0");
  if (!(noload_intercept >= 0.0))
    throw std::invalid_argument("noload_intercept must be >= 0");
}

double pedal_power(double torque, double cadence) { return torque * cadence; }

double human_wheel_power(double torque, double cadence, bool motor_active,
                         const PowerSplitParams& p) {
  const double effective_torque = motor_active ? torque - p.torque_bias : torque;
  return std::max(p.scaling * p.crank_efficiency * effective_torque * cadence, 0.0);
}

double motor_wheel_power(double electrical_power, YTilde y_tilde,
                         const PowerSplitParams& p) {
  return std::max(electrical_power * p.motor_efficiency - p.noload_power(y_tilde), 0.0);
}

double electrical_power(double battery_voltage, double motor_current) {
  return battery_voltage * motor_current;
}

PowerSplit power_split(double human, double motor) {
  PowerSplit s;
  s.human_wheel_power = human;
  s.motor_wheel_power = motor;
  s.wheel_power = human + motor;
  if (s.wheel_power > 0.0) {
    s.share = human / s.wheel_power;
    s.defined = true;
  }
  return s;
}

NoloadFit fit_noload_params(std::span<const NoloadSample> samples, double efficiency) {
  if (samples.size() < 2) throw FitError("no-load fit needs at least two samples");
  if (!(efficiency > 0.0)) throw FitError("no-load fit needs a positive efficiency");

  // Centred form: slope = Sxy / Sxx about the sample means.
  const double n = static_cast<double>(samples.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& s : samples) {
    mean_x += s.y_tilde;
    mean_y += efficiency * s.electrical_power;
  }
  mean_x /= n;
  mean_y /= n;

  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& s : samples) {
    const double dx = s.y_tilde - mean_x;
    sxx += dx * dx;
    sxy += dx * (efficiency * s.electrical_power - mean_y);
  }
  if (!(sxx > 0.0)) throw FitError("no-load fit is rank deficient: all Y~ values are equal");

  NoloadFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;

  double ss = 0.0;
  for (const auto& s : samples) {
    const double r =
        efficiency * s.electrical_power - (fit.slope * s.y_tilde + fit.intercept);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n) / efficiency;
  return fit;
}

SectorBounds sector_bounds(std::span<const SweepPoint> sweep, double zero_tolerance) {
  if (sweep.empty()) throw DegenerateSweep("empty sweep");
  if (!std::is_sorted(sweep.begin(), sweep.end(), [](const auto& a, const auto& b) {
        return a.wheel_speed < b.wheel_speed;
      }))
    throw DegenerateSweep("sweep is not sorted by wheel speed");

  auto human_on = std::find_if(sweep.begin(), sweep.end(),
                               [](const auto& p) { return p.human_wheel_power > 0.0; });
  if (human_on == sweep.end()) throw DegenerateSweep("human wheel power never positive");

  auto motor_off = std::find_if(human_on, sweep.end(), [&](const auto& p) {
    return p.motor_wheel_power <= zero_tolerance;
  });
  if (motor_off == sweep.end()) throw DegenerateSweep("motor never free-wheels");

  SectorBounds b{human_on->wheel_speed, motor_off->wheel_speed};
  if (!(b.s1 < b.s2)) throw DegenerateSweep("no shared sector: S1 >= S2");
  return b;
}

Sector classify_sector(double wheel_speed, const SectorBounds& bounds) {
  if (wheel_speed < bounds.s1) return Sector::HumanFreewheel;
  if (wheel_speed > bounds.s2) return Sector::MotorFreewheel;
  return Sector::Shared;
}

const char* to_string(Sector s) {
  switch (s) {
    case Sector::HumanFreewheel: return "HumanFreewheel";
    case Sector::Shared: return "Shared";
    case Sector::MotorFreewheel: return "MotorFreewheel";
  }
  return "?";
}

}  // namespace ebike::powersplit
