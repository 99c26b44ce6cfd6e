#include "ebike/physics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ebike::physics {

void EnvironmentParams::validate() const {
  if (!(air_density > 0.0)) throw std::invalid_argument("air_density must be > 0");
  if (!(frontal_area > 0.0)) throw std::invalid_argument("frontal_area must be > 0");
  if (!(mechanical_efficiency > 0.0 && mechanical_efficiency <= 1.0))
    throw std::invalid_argument("mechanical_efficiency must be in (0, 1]");
  if (!(rolling_coefficient >= 0.0))
    throw std::invalid_argument("rolling_coefficient must be >= 0");
  if (!(gravity > 0.0)) throw std::invalid_argument("gravity must be > 0");
  if (!std::isfinite(drag_coefficient) || !std::isfinite(road_gradient) ||
      !std::isfinite(wind_speed))
    throw std::invalid_argument("environment parameters must be finite");
}

void MassParams::validate() const {
  if (!(rider_mass > 0.0)) throw std::invalid_argument("rider_mass must be > 0");
  if (!(bike_mass > 0.0)) throw std::invalid_argument("bike_mass must be > 0");
}

double air_resistance(double speed, const EnvironmentParams& env) {
  const double relative = speed + env.wind_speed;
  return 0.5 * env.air_density * env.drag_coefficient * env.frontal_area *
         relative * std::abs(relative);
}

double drafting_factor(double gap) {
  if (gap < 0.0 || std::isnan(gap))
    throw std::domain_error("drafting_factor: wheel gap must be >= 0");
  return std::min(0.62 - 0.0104 * gap + 0.0452 * gap * gap, 1.0);
}

double rolling_resistance(const MassParams& mass, const EnvironmentParams& env) {
  return env.rolling_coefficient * mass.total() * env.gravity *
         std::cos(std::atan(env.road_gradient));
}

double gravity_force(const MassParams& mass, const EnvironmentParams& env) {
  return mass.total() * env.gravity * std::sin(std::atan(env.road_gradient));
}

double acceleration_force(const MassParams& mass, double acceleration) {
  return mass.total() * acceleration;
}

double resistive_force(double speed, const MassParams& mass,
                       const EnvironmentParams& env) {
  return air_resistance(speed, env) + rolling_resistance(mass, env) +
         gravity_force(mass, env);
}

double leader_power(double speed, double acceleration, const MassParams& mass,
                    const EnvironmentParams& env) {
  const double force = resistive_force(speed, mass, env) +
                       acceleration_force(mass, acceleration);
  return force * speed / env.mechanical_efficiency;
}

double drafting_power(double speed, double acceleration, double gap,
                      const MassParams& mass, const EnvironmentParams& env) {
  const double force = air_resistance(speed, env) * drafting_factor(gap) +
                       rolling_resistance(mass, env) + gravity_force(mass, env) +
                       acceleration_force(mass, acceleration);
  return force * speed / env.mechanical_efficiency;
}

}  // namespace ebike::physics
