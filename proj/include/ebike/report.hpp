#pragma once

// Session summaries: tracking-error percentiles, per-zone ventilation,
// dose and heart-rate extremes.

#include <array>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "ebike/sim.hpp"

namespace ebike::report {

inline constexpr std::array<double, 7> kPercentileLevels = {5, 10, 25, 50, 75, 90, 95};

// Linear interpolation between order statistics (rank (n-1)·q/100).
// Throws std::invalid_argument on an empty sample or q outside [0, 100].
double percentile(std::vector<double> values, double q);

struct ReportSummary {
  std::array<double, 7> error_percentiles{};  // e in percent, at kPercentileLevels
  double within_tolerance = 0.0;              // fraction of ticks with |e| <= 0.10
  std::size_t controller_ticks = 0;
  std::map<route::ZoneKind, double> steady_ventilation;  // L/min
  double total_dose = 0.0;                               // ug
  double peak_hr = 0.0;
  double min_hr = 0.0;
};

// Mean VE over the latter half of every contiguous visit to each zone kind.
std::map<route::ZoneKind, double> steady_ventilation(std::span<const sim::LogRecord> records);

// Errors are taken from controller ticks at t >= warmup. With no such
// ticks the percentiles and tolerance fraction are left at zero.
ReportSummary summarize(std::span<const sim::LogRecord> records, double warmup = 30.0,
                        double tolerance = 0.10);

void write_summary_csv(const ReportSummary& s, std::ostream& out);
void print_summary(const ReportSummary& s, std::ostream& out);

}  // namespace ebike::report
