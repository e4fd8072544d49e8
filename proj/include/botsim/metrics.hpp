#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "botsim/bot.hpp"
#include "botsim/message.hpp"

namespace botsim {

// Per-cycle snapshot of the quantities the run reports.
struct MetricsSample {
  SimTime time = 0.0;
  std::vector<std::uint32_t> per_sensor_in_degree;
  double mean_sensor_in_degree = 0.0;
  std::uint64_t blacklist_tp = 0;
  std::uint64_t blacklist_fp = 0;
  std::uint32_t online_bots = 0;
  std::uint32_t isolated_bots = 0;
  double newest_command_coverage = 1.0;
};

struct RunSummary {
  double final_mean_sensor_in_degree = 0.0;
  std::optional<double> baseline_final_mean_in_degree;
  std::optional<double> reduction_pct;
  std::optional<double> precision;
  std::optional<double> recall;
  std::uint64_t total_blacklist_events = 0;
  double runtime_wall_clock = 0.0;
  // transport accounting (conservation check)
  std::uint64_t messages_sent = 0;
  std::uint64_t messages_lost = 0;
  std::uint64_t messages_delivered = 0;
  std::uint64_t messages_corrupted = 0;
};

namespace detail {
inline std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}
}  // namespace detail

// metrics.csv schema: time_s, in_degree_<i> per sensor, mean_in_degree,
// blacklist_tp, blacklist_fp, online_bots, coverage.
inline std::string metrics_csv_header(std::size_t n_sensors) {
  std::string h = "time_s";
  for (std::size_t i = 0; i < n_sensors; ++i)
    h += ",in_degree_" + std::to_string(i);
  h += ",mean_in_degree,blacklist_tp,blacklist_fp,online_bots,coverage";
  return h;
}

inline std::string metrics_csv_row(const MetricsSample& s) {
  std::string row = detail::fmt_real(s.time);
  for (auto d : s.per_sensor_in_degree) row += "," + std::to_string(d);
  row += "," + detail::fmt_real(s.mean_sensor_in_degree);
  row += "," + std::to_string(s.blacklist_tp);
  row += "," + std::to_string(s.blacklist_fp);
  row += "," + std::to_string(s.online_bots);
  row += "," + detail::fmt_real(s.newest_command_coverage);
  return row;
}

inline std::string metrics_to_csv(const std::vector<MetricsSample>& samples,
                                  std::size_t n_sensors) {
  std::string out = metrics_csv_header(n_sensors) + "\n";
  for (const auto& s : samples) out += metrics_csv_row(s) + "\n";
  return out;
}

inline MetricsSample parse_metrics_row(const std::string& line,
                                       std::size_t n_sensors) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (cells.size() != n_sensors + 6)
    throw std::runtime_error("metrics row has wrong column count");
  MetricsSample s;
  std::size_t i = 0;
  s.time = std::stod(cells[i++]);
  for (std::size_t k = 0; k < n_sensors; ++k)
    s.per_sensor_in_degree.push_back(
        static_cast<std::uint32_t>(std::stoul(cells[i++])));
  s.mean_sensor_in_degree = std::stod(cells[i++]);
  s.blacklist_tp = std::stoull(cells[i++]);
  s.blacklist_fp = std::stoull(cells[i++]);
  s.online_bots = static_cast<std::uint32_t>(std::stoul(cells[i++]));
  s.newest_command_coverage = std::stod(cells[i++]);
  return s;
}

inline std::vector<MetricsSample> parse_metrics_csv(const std::string& text,
                                                    std::size_t n_sensors) {
  std::vector<MetricsSample> out;
  std::stringstream ss(text);
  std::string line;
  bool first = true;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      continue;  // header
    }
    out.push_back(parse_metrics_row(line, n_sensors));
  }
  return out;
}

inline std::string events_csv_header() {
  return "time_s,observer,target,score,target_is_sensor";
}

inline std::string events_to_csv(const std::vector<BlacklistEvent>& events) {
  std::string out = events_csv_header() + "\n";
  for (const auto& e : events) {
    out += detail::fmt_real(e.time) + "," + std::to_string(e.observer) + "," +
           std::to_string(e.target) + "," + detail::fmt_real(e.score) + "," +
           (e.target_is_sensor ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace botsim
