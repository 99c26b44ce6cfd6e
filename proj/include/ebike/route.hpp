#pragma once

// Zoned cycling loop (non-polluted, transient, polluted) with per-zone
// concentration and target human share m*.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebike::route {

enum class ZoneKind { NonPolluted, Transient, Polluted };

const char* to_string(ZoneKind kind);
std::optional<ZoneKind> parse_zone_kind(const std::string& text);

struct Zone {
  ZoneKind kind = ZoneKind::NonPolluted;
  double start = 0.0;          // m
  double end = 0.0;            // m
  double concentration = 0.0;  // ug/m^3
  std::optional<double> target_share;  // m*, absent for Transient zones

  double length() const { return end - start; }
};

enum class RampShape { Linear, Cosine };

struct Route {
  std::vector<Zone> zones;
  RampShape ramp = RampShape::Linear;

  double total_length() const { return zones.empty() ? 0.0 : zones.back().end - zones.front().start; }
  // Zone index containing `position` after wrapping.
  std::size_t zone_index(double position) const;
};

class RouteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Appends a zone starting where the previous one ended.
void append_zone(Route& route, ZoneKind kind, double length, double concentration,
                 std::optional<double> target_share = std::nullopt);

const Zone& zone_at(double position, const Route& route);

double target_m(double position, const Route& route);

// The m* a Transient zone ramps from and to: the nearest non-transient
// neighbours, searched cyclically.
struct RampEnds {
  double from = 0.0;
  double to = 0.0;
};
RampEnds transient_ends(std::size_t zone_index, const Route& route);

std::vector<std::string> validate_route(const Route& route);

enum class Sex { Female, Male };
enum class AgeBand { Under20, Age20to60 };
enum class Terrain { Flat };

class UnsupportedDemographic : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Minimum-dose cycling speed in km/h for the tabulated demographics.
double mds_speed(Sex sex, AgeBand age, Terrain terrain);

// Three-zone loop used by the default scenarios, repeated once per lap.
Route three_zone_loop(double clean_length = 800.0, double transient_length = 200.0,
                 double polluted_length = 800.0, double exit_transient_length = 200.0);

}  // namespace ebike::route
