#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "../support/gen.hpp"
#include "ebike/report.hpp"
#include "ebike/scenario.hpp"

using namespace ebike;

namespace {

// Sorted-sample definition, written out independently.
double percentile_ref(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double rank = (static_cast<double>(v.size()) - 1.0) * q / 100.0;
  const auto lo = static_cast<std::size_t>(rank);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (rank - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

sim::LogRecord tick(double t, std::optional<double> e) {
  sim::LogRecord r;
  r.t = t;
  r.error = e;
  r.heart_rate = 80.0 + t;
  return r;
}

}  // namespace

TEST_CASE("percentile examples") {
  CHECK(report::percentile({0.0, 0.0, 0.0}, 50) == 0.0);
  CHECK(report::percentile({-0.1, 0.0, 0.1}, 50) == 0.0);
  CHECK(report::percentile({1.0, 2.0, 3.0, 4.0}, 50) == 2.5);
  CHECK(report::percentile({7.0}, 95) == 7.0);
  CHECK_THROWS_AS(report::percentile({}, 50), std::invalid_argument);
  CHECK_THROWS_AS(report::percentile({1.0}, 101), std::invalid_argument);
}

TEST_CASE("percentiles are monotone and match the reference") {
  gen::Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(static_cast<std::size_t>(rng.integer(1, 60)));
    for (auto& x : v) x = rng.normal(0.05);
    double prev = -1e300;
    for (double q : report::kPercentileLevels) {
      const double p = report::percentile(v, q);
      CHECK(p >= prev);
      CHECK(p == doctest::Approx(percentile_ref(v, q)).epsilon(1e-12));
      prev = p;
    }
    CHECK(report::percentile(v, 0) == *std::min_element(v.begin(), v.end()));
    CHECK(report::percentile(v, 100) == *std::max_element(v.begin(), v.end()));
  }
}

TEST_CASE("summary uses controller ticks after the warm-up") {
  std::vector<sim::LogRecord> log;
  log.push_back(tick(10.0, 0.9));  // warm-up, ignored
  log.push_back(tick(31.0, std::nullopt));
  log.push_back(tick(32.0, -0.1));
  log.push_back(tick(33.0, 0.0));
  log.push_back(tick(34.0, 0.2));
  const auto s = report::summarize(log);
  CHECK(s.controller_ticks == 3);
  CHECK(s.error_percentiles[3] == 0.0);
  CHECK(s.within_tolerance == doctest::Approx(2.0 / 3.0));
  CHECK(s.peak_hr == 114.0);
  CHECK(s.min_hr == 90.0);

  std::vector<sim::LogRecord> none{tick(1.0, std::nullopt)};
  const auto empty = report::summarize(none);
  CHECK(empty.controller_ticks == 0);
  CHECK(empty.within_tolerance == 0.0);
}

TEST_CASE("steady ventilation averages the latter half of each visit") {
  std::vector<sim::LogRecord> log;
  for (int i = 0; i < 4; ++i) {
    auto r = tick(i, std::nullopt);
    r.ventilation = i < 2 ? 10.0 : 20.0;
    log.push_back(r);
  }
  for (int i = 0; i < 2; ++i) {
    auto r = tick(4 + i, std::nullopt);
    r.zone = route::ZoneKind::Polluted;
    r.ventilation = 50.0 + i;
    log.push_back(r);
  }
  const auto ve = report::steady_ventilation(log);
  CHECK(ve.at(route::ZoneKind::NonPolluted) == 20.0);
  CHECK(ve.at(route::ZoneKind::Polluted) == 51.0);
  CHECK(ve.count(route::ZoneKind::Transient) == 0);
}

TEST_CASE("summary CSV") {
  const auto log = sim::run(scenario::closed_loop_two_lap());
  const auto s = report::summarize(log.records);
  std::ostringstream out;
  report::write_summary_csv(s, out);
  const auto text = out.str();
  CHECK(text.rfind("metric,value\n", 0) == 0);
  for (const char* key : {"error_p5,", "error_p50,", "error_p95,", "within_tolerance,", "controller_ticks,",
                          "ve_Polluted,", "total_dose,", "peak_hr,", "min_hr,"})
    CHECK(text.find(key) != std::string::npos);
  CHECK(s.total_dose == log.records.back().dose);
}
