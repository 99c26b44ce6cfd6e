#pragma once

// Rider physiology: discrete heart-rate dynamics driven by rider power,
// heart-rate-to-ventilation coupling and inhaled pollutant dose.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ebike::physio {

struct HeartRateParams {
  double resting_hr = 70.0;            // HR_S, BPM
  double anaerobic_threshold = 175.0;  // HR_iAT, BPM
  double k1 = 0.03;
  double k2 = 0.95;
  double k3 = 0.0015;
  double k4 = -1e-4;
  double k5 = 1e-5;
  double time_constant = 60.0;  // s
  double sample_time = 1.0;     // T_A, s

  void validate() const;
};

// Gains used by the model's published qualitative checks; fast-responding.
HeartRateParams reference_hr_params();

class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct RiderPhysioState {
  std::int64_t step = 0;  // k
  std::vector<double> hr_history;
  std::optional<std::int64_t> k_on;
  double delta_hr = 0.0;
  double above_threshold_sum = 0.0;  // running K4 history sum
  double below_threshold_sum = 0.0;  // running K5 history sum, from k_on
  double ventilation = 0.0;          // L/min
  double cumulative_dose = 0.0;      // ug

  static RiderPhysioState initial(const HeartRateParams& p);
  double heart_rate() const;
};

// sigma(x): 1 for x >= 0, else 0.
double unit_step(double x);

// Advances the heart-rate recurrence by one sample with rider power
// `power` (W) and returns HR(k). Output is clamped to [0.8 HR_S, 220].
// Throws StateError if `state` was never initialised.
double hr_step(RiderPhysioState& state, double power, const HeartRateParams& p);

double minute_ventilation(double breathing_frequency, double tidal_volume);

struct VentilationCalibration {
  double hr_low = 70.0;
  double ve_low = 25.0;
  double hr_high = 120.0;
  double ve_high = 65.0;
  double ve_floor = 6.0;
  double lag = 0.0;  // s, first-order lag on VE; 0 disables it

  void validate() const;
};

double ventilation_from_hr(double hr, const VentilationCalibration& cal);

// First-order lag step toward `target`; a zero time constant passes through.
double lag_step(double previous, double target, double dt, double time_constant);

// ug inhaled over `dt` seconds at ventilation `ve` (L/min) and concentration
// `concentration` (ug/m^3).
double inhaled_dose_step(double ve, double concentration, double dt);

}  // namespace ebike::physio
