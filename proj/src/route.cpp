#include "ebike/route.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ebike::route {

const char* to_string(ZoneKind kind) {
  switch (kind) {
    case ZoneKind::NonPolluted: return "NonPolluted";
    case ZoneKind::Transient: return "Transient";
    case ZoneKind::Polluted: return "Polluted";
  }
  return "?";
}

std::optional<ZoneKind> parse_zone_kind(const std::string& text) {
  if (text == "NonPolluted") return ZoneKind::NonPolluted;
  if (text == "Transient") return ZoneKind::Transient;
  if (text == "Polluted") return ZoneKind::Polluted;
  return std::nullopt;
}

std::size_t Route::zone_index(double position) const {
  if (zones.empty()) throw RouteError("route has no zones");
  if (position < 0.0 || std::isnan(position))
    throw RouteError("route position must be >= 0");
  const double length = total_length();
  double offset = std::fmod(position, length);
  const double p = zones.front().start + offset;
  // Last zone whose start is <= p; a boundary belongs to the zone it starts.
  auto it = std::upper_bound(zones.begin(), zones.end(), p,
                             [](double v, const Zone& z) { return v < z.start; });
  if (it == zones.begin()) return 0;
  return static_cast<std::size_t>(std::distance(zones.begin(), it) - 1);
}

void append_zone(Route& route, ZoneKind kind, double length, double concentration,
                 std::optional<double> target_share) {
  Zone z;
  z.kind = kind;
  z.start = route.zones.empty() ? 0.0 : route.zones.back().end;
  z.end = z.start + length;
  z.concentration = concentration;
  if (kind != ZoneKind::Transient) z.target_share = target_share;
  route.zones.push_back(z);
}

const Zone& zone_at(double position, const Route& route) {
  return route.zones[route.zone_index(position)];
}

RampEnds transient_ends(std::size_t index, const Route& route) {
  const auto n = static_cast<std::ptrdiff_t>(route.zones.size());
  auto share_of = [&](std::size_t start, std::ptrdiff_t dir) -> double {
    for (std::ptrdiff_t step = 1; step <= n; ++step) {
      const auto i = static_cast<std::size_t>(
          ((static_cast<std::ptrdiff_t>(start) + dir * step) % n + n) % n);
      const Zone& z = route.zones[i];
      if (z.kind != ZoneKind::Transient && z.target_share) return *z.target_share;
    }
    throw RouteError("transient zone has no non-transient neighbour with a target share");
  };
  return {share_of(index, -1), share_of(index, +1)};
}

double target_m(double position, const Route& route) {
  const std::size_t index = route.zone_index(position);
  const Zone& zone = route.zones[index];
  if (zone.kind != ZoneKind::Transient) {
    if (!zone.target_share) throw RouteError("zone has no target share");
    return *zone.target_share;
  }
  const RampEnds ends = transient_ends(index, route);
  const double offset = std::fmod(position, route.total_length()) + route.zones.front().start;
  double fraction = std::clamp((offset - zone.start) / zone.length(), 0.0, 1.0);
  if (route.ramp == RampShape::Cosine)
    fraction = 0.5 - 0.5 * std::cos(std::numbers::pi * fraction);
  return ends.from + fraction * (ends.to - ends.from);
}

std::vector<std::string> validate_route(const Route& route) {
  std::vector<std::string> violations;
  if (route.zones.empty()) {
    violations.emplace_back("route has no zones");
    return violations;
  }
  const std::size_t n = route.zones.size();
  bool has_anchor = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Zone& z = route.zones[i];
    const std::string label = "zone " + std::to_string(i) + " (" + to_string(z.kind) + ")";
    if (!(z.start < z.end)) violations.push_back(label + ": start must be < end");
    if (i > 0 && z.start != route.zones[i - 1].end)
      violations.push_back(label + ": not contiguous with the previous zone");
    if (!(z.concentration >= 0.0))
      violations.push_back(label + ": concentration must be >= 0");
    if (z.kind == ZoneKind::Transient) continue;
    if (!z.target_share) {
      violations.push_back(label + ": missing target share");
      continue;
    }
    has_anchor = true;
    if (!(*z.target_share > 0.0 && *z.target_share <= 1.0))
      violations.push_back(label + ": target share must be in (0, 1]; the rider must keep pedalling");
    if (z.kind == ZoneKind::Polluted && route.zones[(i + n - 1) % n].kind != ZoneKind::Transient)
      violations.push_back(label + ": polluted zone must be preceded by a transient zone");
  }
  if (!has_anchor) violations.emplace_back("route has no zone with a target share");
  return violations;
}

double mds_speed(Sex sex, AgeBand age, Terrain terrain) {
  if (terrain == Terrain::Flat) {
    if (sex == Sex::Female && age == AgeBand::Under20) return 12.5;
    if (sex == Sex::Male && age == AgeBand::Age20to60) return 15.0;
  }
  throw UnsupportedDemographic("no minimum-dose speed tabulated for this demographic");
}

Route three_zone_loop(double clean_length, double transient_length, double polluted_length,
                 double exit_transient_length) {
  Route r;
  append_zone(r, ZoneKind::NonPolluted, clean_length, 5.0, 0.9);
  append_zone(r, ZoneKind::Transient, transient_length, 20.0);
  append_zone(r, ZoneKind::Polluted, polluted_length, 80.0, 0.3);
  if (exit_transient_length > 0.0)
    append_zone(r, ZoneKind::Transient, exit_transient_length, 20.0);
  return r;
}

}  // namespace ebike::route
