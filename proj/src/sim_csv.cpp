#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "ebike/sim.hpp"

namespace ebike::sim {

namespace {

constexpr const char* kLogHeader =
    "t,position,zone,v,tau_p,P_Hp,P_Me,P_Hw,P_Mw,m,m_star,m_bar,e,y_tilde,request,hr,ve,dose,"
    "battery_ah";
constexpr const char* kSweepHeader = "y_tilde,S_W,pedal_rpm,P_Hp,P_Me,P_Hw,P_Mw";

void put(std::ostream& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, ptr - buf);
}

void put(std::ostream& out, const std::optional<double>& v) {
  if (v) put(out, *v);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

std::optional<double> to_optional(const std::string& s, std::size_t line_no) {
  if (s.empty()) return std::nullopt;
  return to_double(s, line_no);
}

int to_int(const std::string& s, std::size_t line_no) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  return v;
}

template <typename Fn>
void read_rows(std::istream& in, const char* header, std::size_t columns, Fn&& on_row) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("missing CSV header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw std::runtime_error("unexpected CSV header: " + line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_commas(line);
    if (f.size() != columns)
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(columns) + " columns, got " +
                               std::to_string(f.size()));
    on_row(f, line_no);
  }
}

}  // namespace

void write_log_csv(const SessionLog& log, std::ostream& out) {
  out << kLogHeader << '\n';
  for (const auto& r : log.records) {
    put(out, r.t); out << ',';
    put(out, r.position); out << ',';
    out << route::to_string(r.zone) << ',';
    put(out, r.speed); out << ',';
    put(out, r.torque); out << ',';
    put(out, r.pedal_power); out << ',';
    put(out, r.electrical_power); out << ',';
    put(out, r.human_wheel_power); out << ',';
    put(out, r.motor_wheel_power); out << ',';
    put(out, r.share); out << ',';
    put(out, r.target_share); out << ',';
    put(out, r.smoothed_share); out << ',';
    put(out, r.error); out << ',';
    out << r.y_tilde << ',' << r.request << ',';
    put(out, r.heart_rate); out << ',';
    put(out, r.ventilation); out << ',';
    put(out, r.dose); out << ',';
    put(out, r.battery);
    out << '\n';
  }
}

std::vector<LogRecord> read_log_csv(std::istream& in) {
  std::vector<LogRecord> records;
  read_rows(in, kLogHeader, 19, [&](const std::vector<std::string>& f, std::size_t n) {
    LogRecord r;
    r.t = to_double(f[0], n);
    r.position = to_double(f[1], n);
    auto zone = route::parse_zone_kind(f[2]);
    if (!zone) throw std::runtime_error("line " + std::to_string(n) + ": unknown zone " + f[2]);
    r.zone = *zone;
    r.speed = to_double(f[3], n);
    r.torque = to_double(f[4], n);
    r.pedal_power = to_double(f[5], n);
    r.electrical_power = to_double(f[6], n);
    r.human_wheel_power = to_double(f[7], n);
    r.motor_wheel_power = to_double(f[8], n);
    r.share = to_optional(f[9], n);
    r.target_share = to_double(f[10], n);
    r.smoothed_share = to_optional(f[11], n);
    r.error = to_optional(f[12], n);
    r.y_tilde = to_int(f[13], n);
    r.request = to_int(f[14], n);
    r.heart_rate = to_double(f[15], n);
    r.ventilation = to_double(f[16], n);
    r.dose = to_double(f[17], n);
    r.battery = to_double(f[18], n);
    records.push_back(r);
  });
  return records;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << r.y_tilde << ',';
    put(out, r.wheel_speed); out << ',';
    put(out, r.cadence); out << ',';
    put(out, r.pedal_power); out << ',';
    put(out, r.electrical_power); out << ',';
    put(out, r.human_wheel_power); out << ',';
    put(out, r.motor_wheel_power);
    out << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  read_rows(in, kSweepHeader, 7, [&](const std::vector<std::string>& f, std::size_t n) {
    SweepRow r;
    r.y_tilde = to_int(f[0], n);
    r.wheel_speed = to_double(f[1], n);
    r.cadence = to_double(f[2], n);
    r.pedal_power = to_double(f[3], n);
    r.electrical_power = to_double(f[4], n);
    r.human_wheel_power = to_double(f[5], n);
    r.motor_wheel_power = to_double(f[6], n);
    rows.push_back(r);
  });
  return rows;
}

}  // namespace ebike::sim
