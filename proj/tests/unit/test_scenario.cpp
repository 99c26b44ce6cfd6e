#include <doctest.h>

#include <sstream>

#include "ebike/scenario.hpp"

using namespace ebike;

namespace {

std::string text_of(const sim::ScenarioConfig& c) {
  std::ostringstream out;
  scenario::write(c, out);
  return out.str();
}

std::vector<std::string> problems_of(const std::string& text) {
  std::istringstream in(text);
  try {
    scenario::parse(in);
  } catch (const sim::ConfigError& e) {
    return e.problems();
  }
  return {};
}

}  // namespace

TEST_CASE("presets are valid and round trip through the text form") {
  for (const auto& c : {scenario::closed_loop_two_lap(), scenario::closed_loop_constant_share(),
                        scenario::open_loop_zones(), scenario::trainer()}) {
    CHECK(c.problems().empty());
    const auto text = text_of(c);
    std::istringstream in(text);
    const auto back = scenario::parse(in);
    CHECK(text_of(back) == text);
    CHECK(sim::run(back) == sim::run(c));
  }
}

TEST_CASE("shipped scenario files match the presets") {
  const std::filesystem::path dir = EBIKE_SCENARIO_DIR;
  CHECK(text_of(scenario::load(dir / "closed_loop_two_lap.ini")) == text_of(scenario::closed_loop_two_lap()));
  CHECK(text_of(scenario::load(dir / "closed_loop_constant_share.ini")) ==
        text_of(scenario::closed_loop_constant_share()));
  CHECK(text_of(scenario::load(dir / "open_loop_zones.ini")) == text_of(scenario::open_loop_zones()));
  CHECK(text_of(scenario::load(dir / "trainer.ini")) == text_of(scenario::trainer()));
}

TEST_CASE("partial files keep defaults") {
  std::istringstream in(
      "# comment\n"
      "[sim]\n"
      "duration = 30\n"
      "\n"
      "[zone]\n"
      "kind = NonPolluted\n"
      "length = 500\n"
      "concentration = 2\n"
      "target_share = 0.8\n");
  const auto c = scenario::parse(in);
  CHECK(c.sim.duration == 30.0);
  CHECK(c.sim.telemetry_rate == 5);
  REQUIRE(c.route.zones.size() == 1);
  CHECK(c.route.zones[0].end == 500.0);
  CHECK(c.route.zones[0].target_share == 0.8);
  CHECK(c.problems().empty());
}

TEST_CASE("malformed files report every problem with its line") {
  auto p = problems_of("[sim]\nduration = 10\nduration = 20\n");
  REQUIRE(p.size() == 1);
  CHECK(p[0].find("line 3") != std::string::npos);

  p = problems_of("[sim]\nwobble = 1\n[nowhere]\nx = 1\n");
  REQUIRE(p.size() == 2);
  CHECK(p[0].find("line 2") != std::string::npos);
  CHECK(p[1].find("line 3") != std::string::npos);

  p = problems_of("[environment]\nroad_gradient = steep\n");
  REQUIRE(p.size() == 1);
  CHECK(p[0].find("line 2") != std::string::npos);

  p = problems_of("[controller]\nmode = sideways\n");
  CHECK(p.size() == 1);

  p = problems_of("just text\n");
  CHECK(p.size() == 1);

  p = problems_of("[powersplit]\nmotor_table = 1,2,3\n");
  CHECK(p.empty());  // length is checked by validate(), not the parser

  CHECK_THROWS_AS(scenario::load("/nonexistent/scenario.ini"), sim::ConfigError);
}
