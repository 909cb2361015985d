#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rftr/connection.hpp"
#include "rftr/routing.hpp"
#include "rftr/topology.hpp"
#include "rftr/traffic.hpp"

namespace rftr {

struct TimeSample {
  double time = 0.0;
  double blocking_probability = 0.0;  // blocked / offered so far
  std::uint64_t cumulative_packets = 0;
  double utilization = 0.0;
  double mean_delay = 0.0;            // over service delivered so far
  std::uint64_t probes_sent = 0;

  bool operator==(const TimeSample&) const = default;
};

struct MetricsReport {
  std::uint64_t offered = 0;
  std::uint64_t accepted = 0;
  std::uint64_t blocked = 0;
  std::uint64_t completed = 0;
  std::uint64_t restored = 0;  // successful reroutes
  std::uint64_t dropped = 0;
  std::uint64_t active_at_end = 0;

  double blocking_probability = 0.0;
  std::uint64_t packets_received = 0;
  double mean_delay = 0.0;        // carried-time weighted, seconds
  double mean_setup_delay = 0.0;  // over accepted connections
  double mean_utilization = 0.0;  // mean over samples

  std::uint64_t probes_sent = 0;
  std::uint64_t probe_acks = 0;
  std::uint64_t probe_nacks = 0;

  std::vector<TimeSample> series;

  bool operator==(const MetricsReport&) const = default;
};

// blocked / offered. Throws kUndefinedMetric when nothing was offered.
double blocking_probability(const MetricsReport& report);

// floor(data_rate * carried / (packet_size * 8)).
std::uint64_t packets_for(double carried_seconds, const TrafficModel& model);
std::uint64_t packets_for(const Connection& connection, const TrafficModel& model);

// Propagation plus conversion delay of the path carrying the traffic.
double end_to_end_delay(const Topology& topo, const Lightpath& lp,
                        double conversion_time);

std::pair<double, double> sample_utilization(const Topology& topo, double now);

// One row of summary.csv / runs.csv. Aggregate rows hold per-seed means; the
// seed column lists the contributing seeds separated by ';'.
struct SummaryRow {
  std::string scenario;
  std::string seed;
  double rate = 0.0;  // per-session data rate, Mb/s
  double sources = 0.0;
  double blocking_probability = 0.0;
  double packets_received = 0.0;
  double mean_delay = 0.0;
  double mean_utilization = 0.0;
  std::string router;
  double offered = 0.0;
  double accepted = 0.0;
  double blocked = 0.0;
  double completed = 0.0;
  double restored = 0.0;
  double dropped = 0.0;
  double mean_setup_delay = 0.0;
  double probes_sent = 0.0;
  double probe_acks = 0.0;
  double probe_nacks = 0.0;
  double blocking_probability_stderr = 0.0;
  double runs = 0.0;

  bool operator==(const SummaryRow&) const = default;
};

SummaryRow summary_row(const MetricsReport& report, std::string scenario,
                       std::uint64_t seed, std::string router,
                       const TrafficModel& model);

// Means across seeds; blocking_probability_stderr is the standard error of the
// per-seed blocking probabilities.
SummaryRow aggregate_rows(std::span<const SummaryRow> rows);

std::string summary_csv(std::span<const SummaryRow> rows);
std::vector<SummaryRow> parse_summary_csv(std::string_view text);
std::string timeseries_csv(const MetricsReport& report);
std::vector<TimeSample> parse_timeseries_csv(std::string_view text);

// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

// Writes via a temporary file and rename. Throws kIo.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace rftr
