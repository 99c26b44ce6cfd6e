#include <doctest.h>

#include <cmath>

#include "../support/gen.hpp"
#include "ebike/control.hpp"

using namespace ebike::control;
using ebike::route::ZoneKind;

namespace {

ControllerState filled(double human, double motor, const ControllerConfig& cfg) {
  ControllerState s;
  for (int i = 0; i < std::max(cfg.human_window, cfg.motor_window); ++i) push_sample(s, human, motor, cfg);
  return s;
}

}  // namespace

TEST_CASE("smoothed split") {
  ControllerConfig cfg;
  CHECK(smoothed_split(filled(100, 100, cfg)) == 0.5);
  CHECK(smoothed_split(filled(0, 200, cfg)) == 0.0);
  CHECK_FALSE(smoothed_split(filled(0, 0, cfg)).has_value());

  cfg.human_window = 2;
  cfg.motor_window = 1;
  ControllerState s;
  push_sample(s, 100, 999, cfg);
  push_sample(s, 200, 50, cfg);
  CHECK(smoothed_split(s) == 0.75);

  CHECK_THROWS_AS(smoothed_split(ControllerState{}), NotWarmedUp);
}

TEST_CASE("windows never exceed their lengths") {
  gen::Rng rng(51);
  ControllerConfig cfg;
  cfg.human_window = 7;
  cfg.motor_window = 3;
  ControllerState s;
  for (int i = 0; i < 100; ++i) {
    push_sample(s, rng.uniform(0, 300), rng.uniform(0, 300), cfg);
    CHECK(s.human_buffer.size() <= 7u);
    CHECK(s.motor_buffer.size() <= 3u);
  }
}

TEST_CASE("tracking error") {
  CHECK(tracking_error(0.3, 0.3) == 0.0);
  CHECK(tracking_error(0.9, 0.8) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(tracking_error(0.3, 0.4) == doctest::Approx(-0.1).epsilon(1e-12));
}

TEST_CASE("proportional step") {
  ControllerConfig cfg;
  ControllerState s;
  s.y_tilde = 10;
  CHECK(p_step(s, 0.1, cfg) == 8);
  s.y_tilde = 1;
  CHECK(p_step(s, 0.5, cfg) == 1);
  s.y_tilde = 10;
  CHECK(p_step(s, 0.02, cfg) == 10);
  CHECK(p_step(s, std::nullopt, cfg) == 10);
  s.y_tilde = 16;
  CHECK(p_step(s, -0.9, cfg) == 16);
}

TEST_CASE("proportional step invariants") {
  gen::Rng rng(52);
  ControllerConfig cfg;
  for (int i = 0; i < 20000; ++i) {
    ControllerState s;
    s.y_tilde = rng.integer(1, 16);
    const int before = s.y_tilde;
    const double e = rng.uniform(-2.0, 2.0);
    const int after = p_step(s, e, cfg);
    CHECK(after >= 1);
    CHECK(after <= 16);
    CHECK(s.y_tilde == after);
    if (std::abs(e) <= cfg.tolerance) CHECK(after == before);
    if (e > cfg.tolerance && before > 1) CHECK(after < before);
    if (e < -cfg.tolerance && before < 16) CHECK(after > before);
  }
}

TEST_CASE("deadband is idempotent") {
  gen::Rng rng(53);
  ControllerConfig cfg;
  ControllerState s;
  s.y_tilde = 7;
  for (int i = 0; i < 1000; ++i) p_step(s, rng.uniform(-cfg.tolerance, cfg.tolerance), cfg);
  CHECK(s.y_tilde == 7);
}

TEST_CASE("open-loop policy") {
  const OpenLoopPolicy policy = {{ZoneKind::NonPolluted, 1}, {ZoneKind::Polluted, 14}};
  CHECK(open_loop_command(ZoneKind::NonPolluted, policy) == 1);
  CHECK(open_loop_command(ZoneKind::Polluted, policy) == 14);
  CHECK_THROWS_AS(open_loop_command(ZoneKind::Transient, policy), PolicyError);
}

TEST_CASE("throttle map") {
  CHECK(throttle_to_request(1.0) == 0);
  CHECK(throttle_to_request(4.0) == 255);
  CHECK(throttle_to_request(2.5) == 128);
  CHECK(throttle_to_request(0.0) == 0);
  CHECK(throttle_to_request(5.0) == 255);
}

TEST_CASE("arbitration") {
  CHECK(arbitrate({true, false, 4.0}, 200) == 0);
  CHECK(arbitrate({false, false, 4.0}, 100) == 255);
  CHECK(arbitrate({false, false, 0.5}, 123) == 123);
  CHECK(arbitrate({false, true, 0.0}, 123) == 0);
  CHECK(arbitrate({false, false, 1.0}, 77) == 77);
}

TEST_CASE("arbitration fuzz") {
  gen::Rng rng(54);
  for (int i = 0; i < 20000; ++i) {
    const RiderInputs in{rng.coin(), rng.coin(), rng.uniform(0.0, 5.0)};
    const int a = rng.integer(0, 255);
    const int out = arbitrate(in, a);
    CHECK(out >= 0);
    CHECK(out <= 255);
    CHECK(out == arbitrate(in, a));
    if (in.left_brake || in.right_brake) CHECK(out == 0);
    else if (in.throttle_voltage > kThrottleActiveVolts) CHECK(out == throttle_to_request(in.throttle_voltage));
    else CHECK(out == a);
  }
}

TEST_CASE("config validation") {
  ControllerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.gain = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.human_window = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.tolerance = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
