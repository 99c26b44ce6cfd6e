#pragma once

// Resistive forces and required power for a cyclist on a bicycle.
//
// Forces are in newtons and are positive when they oppose forward motion.
// Powers are in watts. All functions are pure.

namespace ebike::physics {

struct EnvironmentParams {
  double air_density = 1.225;       // kg/m^3
  double drag_coefficient = 1.0;    // dimensionless
  double frontal_area = 0.5;        // m^2
  double rolling_coefficient = 0.005;
  double road_gradient = 0.0;       // rise / run
  double gravity = 9.81;            // m/s^2
  double mechanical_efficiency = 0.95;
  double wind_speed = 0.0;          // m/s, positive is a headwind

  // Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

struct MassParams {
  double rider_mass = 75.0;  // kg
  double bike_mass = 25.0;   // kg

  double total() const { return rider_mass + bike_mass; }
  void validate() const;
};

// 1/2 rho c_d A (v + v_w)^2, signed so that a tailwind faster than the bike
// pushes it forward.
double air_resistance(double speed, const EnvironmentParams& env);

// Correction applied to the air resistance of a follower at wheel gap `gap`
// metres. The fitted polynomial is clamped at 1.0 because drafting cannot
// increase drag. Throws std::domain_error for a negative gap.
double drafting_factor(double gap);

double rolling_resistance(const MassParams& mass, const EnvironmentParams& env);
double gravity_force(const MassParams& mass, const EnvironmentParams& env);
double acceleration_force(const MassParams& mass, double acceleration);

// Sum of the speed-independent-of-acceleration resistances at `speed`:
// air + rolling + gravity.
double resistive_force(double speed, const MassParams& mass,
                       const EnvironmentParams& env);

double leader_power(double speed, double acceleration, const MassParams& mass,
                    const EnvironmentParams& env);

double drafting_power(double speed, double acceleration, double gap,
                      const MassParams& mass, const EnvironmentParams& env);

}  // namespace ebike::physics
