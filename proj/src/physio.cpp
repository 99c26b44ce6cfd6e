#include "ebike/physio.hpp"

#include <algorithm>
#include <cmath>

namespace ebike::physio {

void HeartRateParams::validate() const {
  if (!(resting_hr > 0.0)) throw std::invalid_argument("resting_hr must be > 0");
  if (!(anaerobic_threshold > resting_hr))
    throw std::invalid_argument("anaerobic_threshold must exceed resting_hr");
  if (!(sample_time > 0.0)) throw std::invalid_argument("sample_time must be > 0");
  if (!(time_constant > 0.0)) throw std::invalid_argument("time_constant must be > 0");
  for (double k : {k1, k2, k3, k4, k5})
    if (!std::isfinite(k)) throw std::invalid_argument("heart-rate gains must be finite");
}

HeartRateParams reference_hr_params() {
  HeartRateParams p;
  p.resting_hr = 70.0;
  p.anaerobic_threshold = 140.0;
  p.k1 = 0.05;
  p.k2 = 0.6;
  p.k3 = 0.02;
  p.k4 = -1e-4;
  p.k5 = 1e-4;
  p.time_constant = 60.0;
  p.sample_time = 1.0;
  return p;
}

RiderPhysioState RiderPhysioState::initial(const HeartRateParams& p) {
  RiderPhysioState s;
  s.hr_history.push_back(p.resting_hr);
  return s;
}

double RiderPhysioState::heart_rate() const {
  if (hr_history.empty()) throw StateError("physiology state not initialised");
  return hr_history.back();
}

double unit_step(double x) { return x >= 0.0 ? 1.0 : 0.0; }

double hr_step(RiderPhysioState& state, double power, const HeartRateParams& p) {
  if (state.hr_history.empty()) throw StateError("physiology state not initialised");

  const std::int64_t k = state.step + 1;
  const double ramp = 1.0 - std::exp(-p.sample_time * static_cast<double>(k) / p.time_constant);
  // The history sums cover HR(1)..HR(k-1); they were accumulated as each
  // sample was produced.
  const double delta = p.k1 * power + p.k2 * state.delta_hr + p.k3 * ramp * power +
                       p.k4 * state.above_threshold_sum +
                       p.k5 * state.below_threshold_sum;

  const double hr = std::clamp(p.resting_hr + delta, 0.8 * p.resting_hr, 220.0);

  state.step = k;
  state.delta_hr = hr - p.resting_hr;
  state.hr_history.push_back(hr);

  const double over = hr - p.anaerobic_threshold;
  state.above_threshold_sum += p.sample_time * over * unit_step(over);
  if (!state.k_on && hr > p.anaerobic_threshold) state.k_on = k;
  if (state.k_on) {
    const double under = p.anaerobic_threshold - hr;
    state.below_threshold_sum += p.sample_time * under * unit_step(under);
  }
  return hr;
}

double minute_ventilation(double breathing_frequency, double tidal_volume) {
  return breathing_frequency * tidal_volume;
}

void VentilationCalibration::validate() const {
  if (!(hr_high > hr_low)) throw std::invalid_argument("ventilation anchors need hr_high > hr_low");
  if (!(ve_high > ve_low)) throw std::invalid_argument("ventilation anchors need ve_high > ve_low");
  if (!(ve_floor >= 0.0)) throw std::invalid_argument("ve_floor must be >= 0");
  if (!(lag >= 0.0)) throw std::invalid_argument("ventilation lag must be >= 0");
}

double ventilation_from_hr(double hr, const VentilationCalibration& cal) {
  const double slope = (cal.ve_high - cal.ve_low) / (cal.hr_high - cal.hr_low);
  return std::max(cal.ve_low + slope * (hr - cal.hr_low), cal.ve_floor);
}

double lag_step(double previous, double target, double dt, double time_constant) {
  return previous + dt / (time_constant + dt) * (target - previous);
}

double inhaled_dose_step(double ve, double concentration, double dt) {
  return ve * (dt / 60.0) / 1000.0 * concentration;
}

}  // namespace ebike::physio
