#pragma once

// Wire formats between the bike and the phone.
//
// Sensor frame: six decimal fields separated by single '\t', terminated by
// '\n', in the order battery voltage, motor current, wheel speed, motor
// temperature, pedal speed, pedal torque.
//
// Motor command: decimal digits of a 0-255 value followed by '!'.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ebike::telemetry {

struct TelemetryFrame {
  double battery_voltage = 0.0;    // V
  double motor_current = 0.0;      // A
  double wheel_speed = 0.0;        // km/h
  double motor_temperature = 0.0;  // degC
  double pedal_speed = 0.0;        // RPM
  double pedal_torque = 0.0;       // Nm
  double received_at = 0.0;        // s, receiver clock; not on the wire

  static constexpr std::size_t kFieldCount = 6;
  std::array<double, kFieldCount> wire_values() const {
    return {battery_voltage, motor_current, wheel_speed, motor_temperature, pedal_speed,
            pedal_torque};
  }
};

enum class FrameErrorKind { Empty, CountMismatch, BadNumber };
const char* to_string(FrameErrorKind kind);

class FrameError : public std::runtime_error {
 public:
  FrameError(FrameErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  FrameErrorKind kind() const { return kind_; }

 private:
  FrameErrorKind kind_;
};

class EncodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CommandError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Accepts one record with at most one trailing '\n'. Fields are
// [+-]digits[.digits]; exponents and surrounding whitespace are rejected.
TelemetryFrame parse_frame(std::string_view line, double received_at = 0.0);

// Shortest fixed-notation rendering that parses back to the same double.
std::string encode_frame(const TelemetryFrame& frame);

struct MotorCommand {
  int value = 0;
};

std::string encode_command(MotorCommand cmd);

enum class StreamErrorKind { Empty, Range, BadByte };
const char* to_string(StreamErrorKind kind);

struct StreamEvent {
  std::optional<MotorCommand> command;
  std::optional<StreamErrorKind> error;

  friend bool operator==(const StreamEvent& a, const StreamEvent& b) {
    return a.error == b.error && a.command.has_value() == b.command.has_value() &&
           (!a.command || a.command->value == b.command->value);
  }
};

// Incremental '!'-terminated command reader. One instance per byte stream.
// Errors are reported as events and reset the pending digits; the parser
// never throws on input.
class CommandStreamParser {
 public:
  std::vector<StreamEvent> feed(std::string_view bytes);
  bool pending() const { return digits_ > 0; }

 private:
  void reset() {
    value_ = 0;
    digits_ = 0;
  }

  std::uint32_t value_ = 0;  // saturates above 255
  std::size_t digits_ = 0;
};

inline constexpr double kPwmFullScaleVolts = 5.0;

// Ideal RC-filtered output of an 8-bit duty cycle. Throws std::domain_error
// outside 0..255.
double pwm_to_voltage(int duty);

// Throws std::domain_error outside 0..5 V.
int voltage_to_pwm(double volts);

}  // namespace ebike::telemetry
