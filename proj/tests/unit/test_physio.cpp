#include <doctest.h>

#include <cmath>

#include "../support/gen.hpp"
#include "../support/oracles.hpp"
#include "ebike/physio.hpp"

using namespace ebike::physio;

TEST_CASE("unit step") {
  CHECK(unit_step(0.0) == 1.0);
  CHECK(unit_step(-1.0) == 0.0);
  CHECK(unit_step(3.2) == 1.0);
}

TEST_CASE("heart rate needs an initialised state") {
  RiderPhysioState s;
  CHECK_THROWS_AS(s.heart_rate(), StateError);
  CHECK_THROWS_AS(hr_step(s, 100.0, reference_hr_params()), StateError);
}

TEST_CASE("zero power keeps the resting rate") {
  const auto p = reference_hr_params();
  auto s = RiderPhysioState::initial(p);
  for (int k = 0; k < 600; ++k) CHECK(hr_step(s, 0.0, p) == p.resting_hr);
}

TEST_CASE("first step by direct substitution") {
  const auto p = reference_hr_params();
  auto s = RiderPhysioState::initial(p);
  const double expected = 70.0 + p.k1 * 100.0 + p.k3 * (1.0 - std::exp(-1.0 / 60.0)) * 100.0;
  CHECK(hr_step(s, 100.0, p) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("constant 150 W rises over the first ten steps") {
  const auto p = reference_hr_params();
  auto s = RiderPhysioState::initial(p);
  double prev = p.resting_hr;
  for (int k = 0; k < 10; ++k) {
    const double hr = hr_step(s, 150.0, p);
    CHECK(hr > prev);
    prev = hr;
  }
}

TEST_CASE("incremental recurrence matches the full-history oracle") {
  gen::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    HeartRateParams p = trial % 2 ? reference_hr_params() : HeartRateParams{};
    p.k5 = rng.uniform(0.0, 2e-4);
    std::vector<double> power;
    const int n = rng.integer(50, 400);
    for (int i = 0; i < n; ++i) power.push_back(rng.uniform(0.0, 400.0));
    const auto ref = oracle::heart_rate_series(power, p);
    auto s = RiderPhysioState::initial(p);
    for (int i = 0; i < n; ++i) CHECK(hr_step(s, power[i], p) == doctest::Approx(ref[i]).epsilon(1e-9));
  }
}

TEST_CASE("k_on is set at the first threshold crossing") {
  const auto p = reference_hr_params();
  auto s = RiderPhysioState::initial(p);
  std::optional<std::int64_t> expected;
  for (int k = 1; k <= 300; ++k) {
    const double hr = hr_step(s, 600.0, p);
    if (!expected && hr > p.anaerobic_threshold) expected = k;
  }
  REQUIRE(expected);
  CHECK(s.k_on == expected);
}

TEST_CASE("bounded monotone rise under sub-threshold constant power") {
  gen::Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    HeartRateParams p;
    p.k1 = rng.uniform(0.001, 0.05);
    p.k2 = rng.uniform(0.1, 0.97);
    p.k3 = rng.uniform(0.0, 0.01);
    p.k4 = -rng.uniform(0.0, 1e-3);
    p.anaerobic_threshold = 250.0;  // never reached: HR is clamped at 220
    const double power = rng.uniform(0.0, 300.0);
    auto s = RiderPhysioState::initial(p);
    double prev = p.resting_hr;
    for (int k = 0; k < 600; ++k) {
      const double hr = hr_step(s, power, p);
      CHECK(hr >= prev);
      CHECK(hr <= 220.0);
      prev = hr;
    }
  }
}

TEST_CASE("clamp keeps adversarial gains finite") {
  HeartRateParams p;
  p.k2 = 1.5;
  p.k1 = 1.0;
  auto s = RiderPhysioState::initial(p);
  for (int k = 0; k < 200; ++k) {
    const double hr = hr_step(s, 300.0, p);
    CHECK(hr >= 0.8 * p.resting_hr);
    CHECK(hr <= 220.0);
  }
}

TEST_CASE("minute ventilation") {
  CHECK(minute_ventilation(0.0, 2.0) == 0.0);
  CHECK(minute_ventilation(15.0, 2.0) == 30.0);
  CHECK(minute_ventilation(12.0, 0.5) == 6.0);
}

TEST_CASE("ventilation from heart rate") {
  const VentilationCalibration cal;
  CHECK(ventilation_from_hr(70.0, cal) == 25.0);
  CHECK(ventilation_from_hr(120.0, cal) == 65.0);
  CHECK(ventilation_from_hr(95.0, cal) == 45.0);
  CHECK(ventilation_from_hr(0.0, cal) == cal.ve_floor);
  gen::Rng rng(33);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(0.0, 220.0), b = rng.uniform(0.0, 220.0);
    CHECK(ventilation_from_hr(std::min(a, b), cal) <= ventilation_from_hr(std::max(a, b), cal));
  }
}

TEST_CASE("inhaled dose") {
  CHECK(inhaled_dose_step(30.0, 0.0, 60.0) == 0.0);
  CHECK(inhaled_dose_step(30.0, 10.0, 60.0) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(inhaled_dose_step(60.0, 10.0, 60.0) == doctest::Approx(0.6).epsilon(1e-12));

  // Splitting an interval at any point gives the same total.
  gen::Rng rng(34);
  for (int i = 0; i < 500; ++i) {
    const double ve = rng.uniform(0.0, 100.0), c = rng.uniform(0.0, 100.0), t = rng.uniform(1.0, 600.0);
    const double cut = rng.uniform(0.0, t);
    CHECK(inhaled_dose_step(ve, c, cut) + inhaled_dose_step(ve, c, t - cut) ==
          doctest::Approx(inhaled_dose_step(ve, c, t)).epsilon(1e-12));
  }
}

TEST_CASE("lag step") {
  CHECK(lag_step(0.0, 100.0, 0.2, 0.0) == 100.0);
  CHECK(lag_step(0.0, 100.0, 0.2, 0.2) == 50.0);
  CHECK(lag_step(42.0, 42.0, 0.2, 3.0) == 42.0);
}

TEST_CASE("parameter validation") {
  HeartRateParams p;
  CHECK_NOTHROW(p.validate());
  p.anaerobic_threshold = p.resting_hr;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  VentilationCalibration cal;
  cal.hr_high = cal.hr_low;
  CHECK_THROWS_AS(cal.validate(), std::invalid_argument);
}
