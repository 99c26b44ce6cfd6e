#include "ebike/scenario.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ebike::scenario {

using sim::ScenarioConfig;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("expected a number, got '" + s + "'");
  return v;
}

long long parse_integer(const std::string& s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::invalid_argument("expected true or false, got '" + s + "'");
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

struct Field {
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::optional<std::string>(const ScenarioConfig&)> get;
};

using Accessor = std::function<double&(ScenarioConfig&)>;

Field number(Accessor acc) {
  return {[acc](ScenarioConfig& c, const std::string& v) { acc(c) = parse_double(v); },
          [acc](const ScenarioConfig& c) -> std::optional<std::string> {
            return fmt(acc(const_cast<ScenarioConfig&>(c)));
          }};
}

Field integer(std::function<int&(ScenarioConfig&)> acc) {
  return {[acc](ScenarioConfig& c, const std::string& v) {
            acc(c) = static_cast<int>(parse_integer(v));
          },
          [acc](const ScenarioConfig& c) -> std::optional<std::string> {
            return std::to_string(acc(const_cast<ScenarioConfig&>(c)));
          }};
}

Field flag(std::function<bool&(ScenarioConfig&)> acc) {
  return {[acc](ScenarioConfig& c, const std::string& v) { acc(c) = parse_bool(v); },
          [acc](const ScenarioConfig& c) -> std::optional<std::string> {
            return acc(const_cast<ScenarioConfig&>(c)) ? "true" : "false";
          }};
}

Field policy_entry(route::ZoneKind kind) {
  return {[kind](ScenarioConfig& c, const std::string& v) {
            c.policy[kind] = static_cast<int>(parse_integer(v));
          },
          [kind](const ScenarioConfig& c) -> std::optional<std::string> {
            auto it = c.policy.find(kind);
            if (it == c.policy.end()) return std::nullopt;
            return std::to_string(it->second);
          }};
}

using SectionFields = std::vector<std::pair<std::string, Field>>;

// Ordered so that write() emits keys in a stable, readable order.
const std::vector<std::pair<std::string, SectionFields>>& schema() {
  static const auto table = [] {
    std::vector<std::pair<std::string, SectionFields>> t;
    t.push_back({"environment",
                 {{"air_density", number([](auto& c) -> double& { return c.environment.air_density; })},
                  {"drag_coefficient", number([](auto& c) -> double& { return c.environment.drag_coefficient; })},
                  {"frontal_area", number([](auto& c) -> double& { return c.environment.frontal_area; })},
                  {"rolling_coefficient", number([](auto& c) -> double& { return c.environment.rolling_coefficient; })},
                  {"road_gradient", number([](auto& c) -> double& { return c.environment.road_gradient; })},
                  {"gravity", number([](auto& c) -> double& { return c.environment.gravity; })},
                  {"mechanical_efficiency", number([](auto& c) -> double& { return c.environment.mechanical_efficiency; })},
                  {"wind_speed", number([](auto& c) -> double& { return c.environment.wind_speed; })}}});
    t.push_back({"mass",
                 {{"rider_mass", number([](auto& c) -> double& { return c.mass.rider_mass; })},
                  {"bike_mass", number([](auto& c) -> double& { return c.mass.bike_mass; })}}});
    t.push_back(
        {"powersplit",
         {{"torque_bias", number([](auto& c) -> double& { return c.powersplit.torque_bias; })},
          {"crank_efficiency", number([](auto& c) -> double& { return c.powersplit.crank_efficiency; })},
          {"scaling", number([](auto& c) -> double& { return c.powersplit.scaling; })},
          {"motor_efficiency", number([](auto& c) -> double& { return c.powersplit.motor_efficiency; })},
          {"noload_slope", number([](auto& c) -> double& { return c.powersplit.noload_slope; })},
          {"noload_intercept", number([](auto& c) -> double& { return c.powersplit.noload_intercept; })},
          {"motor_table",
           {[](ScenarioConfig& c, const std::string& v) {
              c.motor.command_power.clear();
              std::istringstream ss(v);
              std::string item;
              while (std::getline(ss, item, ',')) c.motor.command_power.push_back(parse_double(trim(item)));
            },
            [](const ScenarioConfig& c) -> std::optional<std::string> {
              std::string out;
              for (double p : c.motor.command_power) out += (out.empty() ? "" : ", ") + fmt(p);
              return out;
            }}},
          {"free_speed_min", number([](auto& c) -> double& { return c.motor.free_speed_min; })},
          {"free_speed_max", number([](auto& c) -> double& { return c.motor.free_speed_max; })},
          {"taper_width", number([](auto& c) -> double& { return c.motor.taper_width; })},
          {"rated_power", number([](auto& c) -> double& { return c.motor.rated_power; })}}});
    t.push_back(
        {"controller",
         {{"mode",
           {[](ScenarioConfig& c, const std::string& v) {
              if (v == "closed") c.mode = sim::ControlMode::ClosedLoop;
              else if (v == "open") c.mode = sim::ControlMode::OpenLoop;
              else if (v == "fixed") c.mode = sim::ControlMode::Fixed;
              else throw std::invalid_argument("mode must be closed, open or fixed");
            },
            [](const ScenarioConfig& c) -> std::optional<std::string> {
              switch (c.mode) {
                case sim::ControlMode::ClosedLoop: return "closed";
                case sim::ControlMode::OpenLoop: return "open";
                case sim::ControlMode::Fixed: return "fixed";
              }
              return std::nullopt;
            }}},
          {"gain", number([](auto& c) -> double& { return c.controller.gain; })},
          {"sample_period", number([](auto& c) -> double& { return c.controller.sample_period; })},
          {"human_window", integer([](auto& c) -> int& { return c.controller.human_window; })},
          {"motor_window", integer([](auto& c) -> int& { return c.controller.motor_window; })},
          {"tolerance", number([](auto& c) -> double& { return c.controller.tolerance; })},
          {"ytilde_min", integer([](auto& c) -> int& { return c.controller.ytilde_min; })},
          {"ytilde_max", integer([](auto& c) -> int& { return c.controller.ytilde_max; })},
          {"initial_ytilde", integer([](auto& c) -> int& { return c.sim.initial_ytilde; })},
          {"policy_nonpolluted", policy_entry(route::ZoneKind::NonPolluted)},
          {"policy_transient", policy_entry(route::ZoneKind::Transient)},
          {"policy_polluted", policy_entry(route::ZoneKind::Polluted)}}});
    t.push_back({"route",
                 {{"ramp",
                   {[](ScenarioConfig& c, const std::string& v) {
                      if (v == "linear") c.route.ramp = route::RampShape::Linear;
                      else if (v == "cosine") c.route.ramp = route::RampShape::Cosine;
                      else throw std::invalid_argument("ramp must be linear or cosine");
                    },
                    [](const ScenarioConfig& c) -> std::optional<std::string> {
                      return c.route.ramp == route::RampShape::Linear ? "linear" : "cosine";
                    }}}}});
    t.push_back(
        {"rider",
         {{"target_speed", number([](auto& c) -> double& { return c.rider.target_speed; })},
          {"feedforward_torque", number([](auto& c) -> double& { return c.rider.feedforward_torque; })},
          {"torque_gain", number([](auto& c) -> double& { return c.rider.torque_gain; })},
          {"max_torque", number([](auto& c) -> double& { return c.rider.max_torque; })},
          {"torque_noise", number([](auto& c) -> double& { return c.rider.torque_noise; })},
          {"gear_ratio", number([](auto& c) -> double& { return c.rider.gear_ratio; })},
          {"wheel_radius", number([](auto& c) -> double& { return c.rider.wheel_radius; })},
          {"throttle_voltage", number([](auto& c) -> double& { return c.rider.inputs.throttle_voltage; })},
          {"left_brake", flag([](auto& c) -> bool& { return c.rider.inputs.left_brake; })},
          {"right_brake", flag([](auto& c) -> bool& { return c.rider.inputs.right_brake; })}}});
    t.push_back(
        {"physio",
         {{"resting_hr", number([](auto& c) -> double& { return c.heart_rate.resting_hr; })},
          {"anaerobic_threshold", number([](auto& c) -> double& { return c.heart_rate.anaerobic_threshold; })},
          {"k1", number([](auto& c) -> double& { return c.heart_rate.k1; })},
          {"k2", number([](auto& c) -> double& { return c.heart_rate.k2; })},
          {"k3", number([](auto& c) -> double& { return c.heart_rate.k3; })},
          {"k4", number([](auto& c) -> double& { return c.heart_rate.k4; })},
          {"k5", number([](auto& c) -> double& { return c.heart_rate.k5; })},
          {"time_constant", number([](auto& c) -> double& { return c.heart_rate.time_constant; })},
          {"sample_time", number([](auto& c) -> double& { return c.heart_rate.sample_time; })},
          {"drive",
           {[](ScenarioConfig& c, const std::string& v) {
              if (v == "wheel") c.heart_rate_drive = sim::HeartRateDrive::WheelPower;
              else if (v == "pedal") c.heart_rate_drive = sim::HeartRateDrive::PedalPower;
              else throw std::invalid_argument("drive must be wheel or pedal");
            },
            [](const ScenarioConfig& c) -> std::optional<std::string> {
              return c.heart_rate_drive == sim::HeartRateDrive::WheelPower ? "wheel" : "pedal";
            }}},
          {"ve_hr_low", number([](auto& c) -> double& { return c.ventilation.hr_low; })},
          {"ve_low", number([](auto& c) -> double& { return c.ventilation.ve_low; })},
          {"ve_hr_high", number([](auto& c) -> double& { return c.ventilation.hr_high; })},
          {"ve_high", number([](auto& c) -> double& { return c.ventilation.ve_high; })},
          {"ve_floor", number([](auto& c) -> double& { return c.ventilation.ve_floor; })},
          {"ve_lag", number([](auto& c) -> double& { return c.ventilation.lag; })}}});
    t.push_back(
        {"battery",
         {{"capacity", number([](auto& c) -> double& { return c.battery.capacity; })},
          {"nominal_voltage", number([](auto& c) -> double& { return c.battery.nominal_voltage; })},
          {"initial",
           {[](ScenarioConfig& c, const std::string& v) { c.battery.initial = parse_double(v); },
            [](const ScenarioConfig& c) -> std::optional<std::string> {
              if (!c.battery.initial) return std::nullopt;
              return fmt(*c.battery.initial);
            }}}}});
    t.push_back(
        {"sim",
         {{"telemetry_rate", integer([](auto& c) -> int& { return c.sim.telemetry_rate; })},
          {"duration",
           {[](ScenarioConfig& c, const std::string& v) { c.sim.duration = parse_double(v); },
            [](const ScenarioConfig& c) -> std::optional<std::string> {
              if (!c.sim.duration) return std::nullopt;
              return fmt(*c.sim.duration);
            }}},
          {"laps",
           {[](ScenarioConfig& c, const std::string& v) {
              c.sim.laps = static_cast<int>(parse_integer(v));
            },
            [](const ScenarioConfig& c) -> std::optional<std::string> {
              if (!c.sim.laps) return std::nullopt;
              return std::to_string(*c.sim.laps);
            }}},
          {"max_duration", number([](auto& c) -> double& { return c.sim.max_duration; })},
          {"motor_lag", number([](auto& c) -> double& { return c.sim.motor_lag; })},
          {"substeps", integer([](auto& c) -> int& { return c.sim.substeps; })},
          {"speed_floor", number([](auto& c) -> double& { return c.sim.speed_floor; })},
          {"initial_speed", number([](auto& c) -> double& { return c.sim.initial_speed; })},
          {"seed",
           {[](ScenarioConfig& c, const std::string& v) {
              std::uint64_t s = 0;
              auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
              if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
                throw std::invalid_argument("seed must be an unsigned integer");
              c.sim.seed = s;
            },
            [](const ScenarioConfig& c) -> std::optional<std::string> {
              return std::to_string(c.sim.seed);
            }}}}});
    return t;
  }();
  return table;
}

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& [name, fields] : schema()) {
    if (name != section) continue;
    for (const auto& [k, f] : fields)
      if (k == key) return &f;
  }
  return nullptr;
}

bool known_section(const std::string& section) {
  if (section == "zone") return true;
  for (const auto& [name, fields] : schema())
    if (name == section) return true;
  return false;
}

struct ZoneDraft {
  std::optional<route::ZoneKind> kind;
  std::optional<double> length;
  double concentration = 0.0;
  std::optional<double> target_share;
  std::size_t line = 0;
};

}  // namespace

ScenarioConfig parse(std::istream& in) {
  ScenarioConfig cfg;
  cfg.route = {};
  std::vector<std::string> problems;
  std::vector<ZoneDraft> zones;
  std::set<std::pair<std::string, std::string>> seen;
  std::string section;
  std::string raw;
  std::size_t line_no = 0;
  bool route_seen = false;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";

    if (line.front() == '[') {
      if (line.back() != ']') {
        problems.push_back(where + "malformed section header");
        continue;
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!known_section(section)) {
        problems.push_back(where + "unknown section [" + section + "]");
        continue;
      }
      if (section == "zone") {
        zones.push_back({});
        zones.back().line = line_no;
      } else {
        if (section == "route") route_seen = true;
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back(where + "expected key = value");
      continue;
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section.empty()) {
      problems.push_back(where + "key '" + key + "' outside any section");
      continue;
    }
    if (!known_section(section)) continue;

    try {
      if (section == "zone") {
        ZoneDraft& z = zones.back();
        if (key == "kind") {
          z.kind = route::parse_zone_kind(value);
          if (!z.kind) throw std::invalid_argument("unknown zone kind '" + value + "'");
        } else if (key == "length") {
          z.length = parse_double(value);
        } else if (key == "concentration") {
          z.concentration = parse_double(value);
        } else if (key == "target_share") {
          z.target_share = parse_double(value);
        } else {
          throw std::invalid_argument("unknown key '" + key + "' in [zone]");
        }
        continue;
      }
      if (!seen.insert({section, key}).second)
        throw std::invalid_argument("duplicate key '" + key + "' in [" + section + "]");
      const Field* field = find_field(section, key);
      if (!field) throw std::invalid_argument("unknown key '" + key + "' in [" + section + "]");
      field->set(cfg, value);
    } catch (const std::exception& e) {
      problems.push_back(where + e.what());
    }
  }
  (void)route_seen;

  for (const auto& z : zones) {
    const std::string where = "zone at line " + std::to_string(z.line) + ": ";
    if (!z.kind) problems.push_back(where + "missing kind");
    if (!z.length) problems.push_back(where + "missing length");
    if (z.kind && *z.kind == route::ZoneKind::Transient && z.target_share)
      problems.push_back(where + "transient zones take no target_share");
    if (z.kind && z.length) route::append_zone(cfg.route, *z.kind, *z.length, z.concentration, z.target_share);
  }
  if (!problems.empty()) throw sim::ConfigError(std::move(problems));
  return cfg;
}

ScenarioConfig load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw sim::ConfigError({"cannot open scenario file " + path.string()});
  return parse(in);
}

void write(const ScenarioConfig& cfg, std::ostream& out) {
  bool first = true;
  for (const auto& [section, fields] : schema()) {
    if (!first) out << '\n';
    first = false;
    out << '[' << section << "]\n";
    for (const auto& [key, field] : fields)
      if (auto v = field.get(cfg)) out << key << " = " << *v << '\n';
  }
  for (const auto& z : cfg.route.zones) {
    out << "\n[zone]\n"
        << "kind = " << route::to_string(z.kind) << '\n'
        << "length = " << fmt(z.length()) << '\n'
        << "concentration = " << fmt(z.concentration) << '\n';
    if (z.target_share) out << "target_share = " << fmt(*z.target_share) << '\n';
  }
}

// --- presets --------------------------------------------------------------------

ScenarioConfig closed_loop_two_lap() {
  ScenarioConfig c;
  c.environment.road_gradient = 0.015;
  c.mode = sim::ControlMode::ClosedLoop;
  c.route = route::three_zone_loop(800.0, 200.0, 800.0, 200.0);
  c.sim.laps = 2;
  return c;
}

ScenarioConfig closed_loop_constant_share(double share) {
  ScenarioConfig c = closed_loop_two_lap();
  for (auto& z : c.route.zones)
    if (z.target_share) z.target_share = share;
  return c;
}

ScenarioConfig open_loop_zones() {
  ScenarioConfig c;
  c.mode = sim::ControlMode::OpenLoop;
  c.policy = {{route::ZoneKind::NonPolluted, 1},
              {route::ZoneKind::Transient, 10},
              {route::ZoneKind::Polluted, 10}};
  c.route = route::three_zone_loop(1500.0, 300.0, 1000.0, 0.0);
  c.sim.laps = 1;
  return c;
}

ScenarioConfig trainer() {
  ScenarioConfig c;
  c.mode = sim::ControlMode::Fixed;
  c.route = {};
  route::append_zone(c.route, route::ZoneKind::NonPolluted, 1000.0, 0.0, 1.0);
  c.sim.duration = 270.0;
  return c;
}

}  // namespace ebike::scenario
