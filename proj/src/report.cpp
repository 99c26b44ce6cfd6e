#include "ebike/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace ebike::report {

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 100.0)) throw std::invalid_argument("percentile level outside [0, 100]");
  std::sort(values.begin(), values.end());
  const double rank = (static_cast<double>(values.size()) - 1.0) * q / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::map<route::ZoneKind, double> steady_ventilation(std::span<const sim::LogRecord> records) {
  std::map<route::ZoneKind, std::pair<double, std::size_t>> acc;
  std::size_t i = 0;
  while (i < records.size()) {
    std::size_t j = i;
    while (j < records.size() && records[j].zone == records[i].zone) ++j;
    const std::size_t half = i + (j - i) / 2;
    auto& [sum, n] = acc[records[i].zone];
    for (std::size_t k = half; k < j; ++k) {
      sum += records[k].ventilation;
      ++n;
    }
    i = j;
  }
  std::map<route::ZoneKind, double> out;
  for (const auto& [kind, sn] : acc)
    if (sn.second > 0) out[kind] = sn.first / static_cast<double>(sn.second);
  return out;
}

ReportSummary summarize(std::span<const sim::LogRecord> records, double warmup, double tolerance) {
  ReportSummary s;
  std::vector<double> errors;
  for (const auto& r : records)
    if (r.error && r.t >= warmup) errors.push_back(*r.error);
  s.controller_ticks = errors.size();
  if (!errors.empty()) {
    for (std::size_t k = 0; k < kPercentileLevels.size(); ++k)
      s.error_percentiles[k] = 100.0 * percentile(errors, kPercentileLevels[k]);
    const auto within = std::count_if(errors.begin(), errors.end(),
                                      [&](double e) { return std::abs(e) <= tolerance; });
    s.within_tolerance = static_cast<double>(within) / static_cast<double>(errors.size());
  }
  s.steady_ventilation = steady_ventilation(records);
  if (!records.empty()) {
    s.total_dose = records.back().dose;
    auto [lo, hi] = std::minmax_element(records.begin(), records.end(),
                                        [](const auto& a, const auto& b) { return a.heart_rate < b.heart_rate; });
    s.min_hr = lo->heart_rate;
    s.peak_hr = hi->heart_rate;
  }
  return s;
}

void write_summary_csv(const ReportSummary& s, std::ostream& out) {
  out << "metric,value\n";
  for (std::size_t k = 0; k < kPercentileLevels.size(); ++k)
    out << "error_p" << static_cast<int>(kPercentileLevels[k]) << ',' << s.error_percentiles[k] << '\n';
  out << "within_tolerance," << s.within_tolerance << '\n';
  out << "controller_ticks," << s.controller_ticks << '\n';
  for (const auto& [kind, ve] : s.steady_ventilation)
    out << "ve_" << route::to_string(kind) << ',' << ve << '\n';
  out << "total_dose," << s.total_dose << '\n';
  out << "peak_hr," << s.peak_hr << '\n';
  out << "min_hr," << s.min_hr << '\n';
}

void print_summary(const ReportSummary& s, std::ostream& out) {
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(2);
  out << "error percentiles (%):";
  for (std::size_t k = 0; k < kPercentileLevels.size(); ++k)
    out << "  p" << static_cast<int>(kPercentileLevels[k]) << '=' << s.error_percentiles[k];
  out << '\n';
  out << "within +-10%: " << 100.0 * s.within_tolerance << "% of " << s.controller_ticks
      << " controller ticks\n";
  for (const auto& [kind, ve] : s.steady_ventilation)
    out << "steady VE " << route::to_string(kind) << ": " << ve << " L/min\n";
  out << "total dose: " << s.total_dose << " ug\n";
  out << "heart rate: min " << s.min_hr << ", peak " << s.peak_hr << " BPM\n";
  out.flags(flags);
}

}  // namespace ebike::report
