#include "ebike/telemetry.hpp"

#include <charconv>
#include <cmath>

namespace ebike::telemetry {

const char* to_string(FrameErrorKind kind) {
  switch (kind) {
    case FrameErrorKind::Empty: return "Empty";
    case FrameErrorKind::CountMismatch: return "CountMismatch";
    case FrameErrorKind::BadNumber: return "BadNumber";
  }
  return "?";
}

const char* to_string(StreamErrorKind kind) {
  switch (kind) {
    case StreamErrorKind::Empty: return "Empty";
    case StreamErrorKind::Range: return "Range";
    case StreamErrorKind::BadByte: return "BadByte";
  }
  return "?";
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool well_formed_number(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  const std::size_t int_start = i;
  while (i < s.size() && is_digit(s[i])) ++i;
  if (i == int_start) return false;
  if (i < s.size() && s[i] == '.') {
    ++i;
    const std::size_t frac_start = i;
    while (i < s.size() && is_digit(s[i])) ++i;
    if (i == frac_start) return false;
  }
  return i == s.size();
}

double parse_number(std::string_view field, std::size_t index) {
  if (!well_formed_number(field))
    throw FrameError(FrameErrorKind::BadNumber,
                     "field " + std::to_string(index) + " is not a decimal number");
  // from_chars rejects a leading '+'.
  if (field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value, std::chars_format::fixed);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw FrameError(FrameErrorKind::BadNumber,
                     "field " + std::to_string(index) + " is out of range");
  return value;
}

}  // namespace

TelemetryFrame parse_frame(std::string_view line, double received_at) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  if (line.empty()) throw FrameError(FrameErrorKind::Empty, "empty frame");

  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos
                                                                      : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  if (fields.size() != TelemetryFrame::kFieldCount)
    throw FrameError(FrameErrorKind::CountMismatch,
                     "expected 6 fields, got " + std::to_string(fields.size()));

  std::array<double, TelemetryFrame::kFieldCount> v{};
  for (std::size_t i = 0; i < fields.size(); ++i) v[i] = parse_number(fields[i], i);

  TelemetryFrame f;
  f.battery_voltage = v[0];
  f.motor_current = v[1];
  f.wheel_speed = v[2];
  f.motor_temperature = v[3];
  f.pedal_speed = v[4];
  f.pedal_torque = v[5];
  f.received_at = received_at;
  return f;
}

std::string encode_frame(const TelemetryFrame& frame) {
  std::string out;
  char buf[512];
  bool first = true;
  for (double value : frame.wire_values()) {
    if (!std::isfinite(value)) throw EncodeError("frame field is not finite");
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    if (ec != std::errc()) throw EncodeError("frame field could not be rendered");
    if (!first) out.push_back('\t');
    out.append(buf, ptr);
    first = false;
  }
  out.push_back('\n');
  return out;
}

std::string encode_command(MotorCommand cmd) {
  if (cmd.value < 0 || cmd.value > 255)
    throw CommandError("motor command must be within 0..255, got " + std::to_string(cmd.value));
  return std::to_string(cmd.value) + "!";
}

std::vector<StreamEvent> CommandStreamParser::feed(std::string_view bytes) {
  std::vector<StreamEvent> events;
  for (char c : bytes) {
    if (is_digit(c)) {
      value_ = std::min<std::uint32_t>(value_ * 10 + static_cast<std::uint32_t>(c - '0'), 1000);
      ++digits_;
    } else if (c == '!') {
      if (digits_ == 0) {
        events.push_back({std::nullopt, StreamErrorKind::Empty});
      } else if (value_ > 255) {
        events.push_back({std::nullopt, StreamErrorKind::Range});
      } else {
        events.push_back({MotorCommand{static_cast<int>(value_)}, std::nullopt});
      }
      reset();
    } else {
      events.push_back({std::nullopt, StreamErrorKind::BadByte});
      reset();
    }
  }
  return events;
}

double pwm_to_voltage(int duty) {
  if (duty < 0 || duty > 255) throw std::domain_error("PWM duty must be within 0..255");
  return static_cast<double>(duty) * kPwmFullScaleVolts / 255.0;
}

int voltage_to_pwm(double volts) {
  if (!(volts >= 0.0 && volts <= kPwmFullScaleVolts))
    throw std::domain_error("voltage must be within 0..5 V");
  return static_cast<int>(std::lround(volts / kPwmFullScaleVolts * 255.0));
}

}  // namespace ebike::telemetry
