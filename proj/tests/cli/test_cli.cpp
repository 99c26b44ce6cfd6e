#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string output;
};

Result ebike(const std::string& args) {
  const std::string cmd = std::string(EBIKE_BIN) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "ebike_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string scenario(const std::string& name) { return (fs::path(EBIKE_SCENARIO_DIR) / name).string(); }

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("simulate and report") {
  const auto log = scratch("session.csv");
  auto r = ebike("simulate --scenario " + scenario("closed_loop_two_lap.ini") + " --out " + log.string());
  CHECK(r.code == 0);
  CHECK(count_lines(log) > 100);

  const auto summary = scratch("summary.csv");
  r = ebike("report --log " + log.string() + " --out " + summary.string());
  CHECK(r.code == 0);
  std::ifstream in(summary);
  std::string header;
  std::getline(in, header);
  CHECK(header == "metric,value");
}

TEST_CASE("simulate with a duration writes duration x rate rows") {
  const auto ini = scratch("short.ini");
  std::ifstream base(scenario("trainer.ini"));
  std::stringstream text;
  text << base.rdbuf();
  write_file(ini, text.str());
  const auto log = scratch("short.csv");
  const auto r = ebike("simulate --scenario " + ini.string() + " --out " + log.string());
  CHECK(r.code == 0);
  CHECK(count_lines(log) == 1 + 270 * 5);
}

TEST_CASE("configuration errors exit 1 with a message") {
  auto r = ebike("simulate --scenario /no/such/file.ini --out " + scratch("x.csv").string());
  CHECK(r.code == 1);
  CHECK(r.output.find("scenario file not found: /no/such/file.ini") != std::string::npos);

  const auto bad = scratch("bad.ini");
  write_file(bad, "[sim]\nduration = 10\n");  // no zones
  r = ebike("simulate --scenario " + bad.string() + " --out " + scratch("x.csv").string());
  CHECK(r.code == 1);
  CHECK(r.output.find("zone") != std::string::npos);

  r = ebike("simulate");
  CHECK(r.code == 1);
  r = ebike("frobnicate");
  CHECK(r.code == 1);
}

TEST_CASE("sweep, fit-noload and sectors") {
  const auto sweep = scratch("sweep.csv");
  auto r = ebike("sweep --out " + sweep.string() + " --jobs 2");
  CHECK(r.code == 0);

  r = ebike("fit-noload --sweep " + sweep.string());
  CHECK(r.code == 0);
  CHECK(r.output.find("beta1") != std::string::npos);

  r = ebike("sectors --sweep " + sweep.string());
  CHECK(r.code == 0);
  CHECK(r.output.rfind("y_tilde,S1,S2\n", 0) == 0);

  const auto single = scratch("single.csv");
  r = ebike("sweep --y-tilde 6 --out " + single.string());
  CHECK(r.code == 0);
  r = ebike("fit-noload --sweep " + single.string());
  CHECK(r.code == 1);
}

TEST_CASE("replay counts frames") {
  const auto good = scratch("good.frames");
  const std::string frame = "36.8\t1.2\t18.5\t25.0\t60.0\t50.0\n";
  std::string text;
  for (int i = 0; i < 99; ++i) text += frame;
  write_file(good, text + frame);
  auto r = ebike("replay --frames " + good.string());
  CHECK(r.code == 0);
  CHECK(r.output == "100 ok, 0 errors\n");

  const auto one_bad = scratch("bad.frames");
  write_file(one_bad, text + "36.8\tabc\t18.5\t25.0\t60.0\t50.0\n");
  r = ebike("replay --frames " + one_bad.string());
  CHECK(r.output == "99 ok, 1 BadNumber\n");

  const auto empty = scratch("empty.frames");
  write_file(empty, "");
  r = ebike("replay --frames " + empty.string());
  CHECK(r.output == "0 ok, 0 errors\n");
}
