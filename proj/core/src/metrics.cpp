#include "rftr/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "rftr/error.hpp"

namespace rftr {

const char* to_string(ConnectionState state) {
  switch (state) {
    case ConnectionState::kActive: return "active";
    case ConnectionState::kBlocked: return "blocked";
    case ConnectionState::kRestored: return "restored";
    case ConnectionState::kDropped: return "dropped";
    case ConnectionState::kCompleted: return "completed";
  }
  return "?";
}

double Connection::carried_until(double now) const {
  double total = 0.0;
  for (const CarriedSegment& s : carried) {
    total += std::max(0.0, std::min(s.end, now) - s.start);
  }
  if (live()) total += std::max(0.0, now - segment_start);
  return total;
}

double Connection::carried_duration() const {
  double total = 0.0;
  for (const CarriedSegment& s : carried) total += s.end - s.start;
  return total;
}

double blocking_probability(const MetricsReport& report) {
  if (report.offered == 0) {
    throw Error(ErrorCode::kUndefinedMetric,
                "blocking probability is undefined with zero offered demands");
  }
  return static_cast<double>(report.blocked) / static_cast<double>(report.offered);
}

std::uint64_t packets_for(double carried_seconds, const TrafficModel& model) {
  if (!(carried_seconds > 0.0)) return 0;
  const double bits_per_packet = 8.0 * model.packet_size;
  // The epsilon absorbs representation error in products like 2e6 * 0.2.
  return static_cast<std::uint64_t>(
      std::floor(model.data_rate * carried_seconds / bits_per_packet + 1e-9));
}

std::uint64_t packets_for(const Connection& connection, const TrafficModel& model) {
  if (connection.state == ConnectionState::kBlocked) return 0;
  return packets_for(connection.carried_duration(), model);
}

double end_to_end_delay(const Topology& topo, const Lightpath& lp,
                        double conversion_time) {
  return lightpath_delay(topo, lp, conversion_time);
}

std::pair<double, double> sample_utilization(const Topology& topo, double now) {
  return {now, topo.utilization()};
}

SummaryRow summary_row(const MetricsReport& report, std::string scenario,
                       std::uint64_t seed, std::string router,
                       const TrafficModel& model) {
  SummaryRow row;
  row.scenario = std::move(scenario);
  row.seed = std::to_string(seed);
  row.rate = model.data_rate / 1e6;
  row.sources = model.num_sources;
  row.blocking_probability = report.blocking_probability;
  row.packets_received = static_cast<double>(report.packets_received);
  row.mean_delay = report.mean_delay;
  row.mean_utilization = report.mean_utilization;
  row.router = std::move(router);
  row.offered = static_cast<double>(report.offered);
  row.accepted = static_cast<double>(report.accepted);
  row.blocked = static_cast<double>(report.blocked);
  row.completed = static_cast<double>(report.completed);
  row.restored = static_cast<double>(report.restored);
  row.dropped = static_cast<double>(report.dropped);
  row.mean_setup_delay = report.mean_setup_delay;
  row.probes_sent = static_cast<double>(report.probes_sent);
  row.probe_acks = static_cast<double>(report.probe_acks);
  row.probe_nacks = static_cast<double>(report.probe_nacks);
  row.blocking_probability_stderr = 0.0;
  row.runs = 1.0;
  return row;
}

namespace {

// Numeric columns after the identifying ones, in CSV order.
using NumericField = double SummaryRow::*;

struct Column {
  const char* name;
  NumericField field;  // nullptr for string columns
};

constexpr Column kSummaryColumns[] = {
    {"scenario", nullptr},
    {"seed", nullptr},
    {"rate", &SummaryRow::rate},
    {"sources", &SummaryRow::sources},
    {"blocking_probability", &SummaryRow::blocking_probability},
    {"packets_received", &SummaryRow::packets_received},
    {"mean_delay", &SummaryRow::mean_delay},
    {"mean_utilization", &SummaryRow::mean_utilization},
    {"router", nullptr},
    {"offered", &SummaryRow::offered},
    {"accepted", &SummaryRow::accepted},
    {"blocked", &SummaryRow::blocked},
    {"completed", &SummaryRow::completed},
    {"restored", &SummaryRow::restored},
    {"dropped", &SummaryRow::dropped},
    {"mean_setup_delay", &SummaryRow::mean_setup_delay},
    {"probes_sent", &SummaryRow::probes_sent},
    {"probe_acks", &SummaryRow::probe_acks},
    {"probe_nacks", &SummaryRow::probe_nacks},
    {"blocking_probability_stderr", &SummaryRow::blocking_probability_stderr},
    {"runs", &SummaryRow::runs},
};

std::string* string_field(SummaryRow& row, std::string_view name) {
  if (name == "scenario") return &row.scenario;
  if (name == "seed") return &row.seed;
  if (name == "router") return &row.router;
  return nullptr;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  for (std::string_view line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

template <typename T>
T parse_field(std::string_view tok, const char* column) {
  T v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw Error(ErrorCode::kParse,
                std::string("bad value '") + std::string(tok) + "' in column " + column);
  }
  return v;
}

double mean_of(std::span<const SummaryRow> rows, NumericField f) {
  double sum = 0.0;
  for (const SummaryRow& r : rows) sum += r.*f;
  return sum / static_cast<double>(rows.size());
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

SummaryRow aggregate_rows(std::span<const SummaryRow> rows) {
  if (rows.empty()) {
    throw Error(ErrorCode::kUndefinedMetric, "cannot aggregate zero runs");
  }
  SummaryRow out;
  out.scenario = rows.front().scenario;
  out.router = rows.front().router;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) out.seed += ';';
    out.seed += rows[i].seed;
  }
  for (const Column& c : kSummaryColumns) {
    if (c.field) out.*(c.field) = mean_of(rows, c.field);
  }
  const double n = static_cast<double>(rows.size());
  double var = 0.0;
  if (rows.size() > 1) {
    for (const SummaryRow& r : rows) {
      double d = r.blocking_probability - out.blocking_probability;
      var += d * d;
    }
    var /= (n - 1.0);
  }
  out.blocking_probability_stderr = std::sqrt(var / n);
  out.runs = n;
  return out;
}

std::string summary_csv(std::span<const SummaryRow> rows) {
  std::string out;
  for (std::size_t i = 0; i < std::size(kSummaryColumns); ++i) {
    if (i) out += ',';
    out += kSummaryColumns[i].name;
  }
  out += '\n';
  for (const SummaryRow& row : rows) {
    SummaryRow copy = row;
    for (std::size_t i = 0; i < std::size(kSummaryColumns); ++i) {
      if (i) out += ',';
      const Column& c = kSummaryColumns[i];
      out += c.field ? format_double(row.*(c.field)) : *string_field(copy, c.name);
    }
    out += '\n';
  }
  return out;
}

std::vector<SummaryRow> parse_summary_csv(std::string_view text) {
  auto lines = lines_of(text);
  if (lines.empty()) throw Error(ErrorCode::kParse, "summary CSV has no header");
  auto header = split(lines[0], ',');
  if (header.size() != std::size(kSummaryColumns)) {
    throw Error(ErrorCode::kParse, "summary CSV header has wrong column count");
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] != kSummaryColumns[i].name) {
      throw Error(ErrorCode::kParse, "unexpected summary column '" +
                                         std::string(header[i]) + "'");
    }
  }
  std::vector<SummaryRow> rows;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    auto cells = split(lines[l], ',');
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kParse,
                  "summary CSV line " + std::to_string(l + 1) + " has wrong cell count");
    }
    SummaryRow row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const Column& c = kSummaryColumns[i];
      if (c.field) {
        row.*(c.field) = parse_field<double>(cells[i], c.name);
      } else {
        *string_field(row, c.name) = std::string(cells[i]);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string timeseries_csv(const MetricsReport& report) {
  std::string out =
      "time,blocking_probability_so_far,cumulative_packets,utilization,"
      "mean_delay_so_far,probes_sent\n";
  for (const TimeSample& s : report.series) {
    out += format_double(s.time);
    out += ',';
    out += format_double(s.blocking_probability);
    out += ',';
    out += std::to_string(s.cumulative_packets);
    out += ',';
    out += format_double(s.utilization);
    out += ',';
    out += format_double(s.mean_delay);
    out += ',';
    out += std::to_string(s.probes_sent);
    out += '\n';
  }
  return out;
}

std::vector<TimeSample> parse_timeseries_csv(std::string_view text) {
  auto lines = lines_of(text);
  if (lines.empty()) throw Error(ErrorCode::kParse, "time-series CSV has no header");
  std::vector<TimeSample> out;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    auto cells = split(lines[l], ',');
    if (cells.size() != 6) {
      throw Error(ErrorCode::kParse,
                  "time-series CSV line " + std::to_string(l + 1) + " has wrong cell count");
    }
    TimeSample s;
    s.time = parse_field<double>(cells[0], "time");
    s.blocking_probability = parse_field<double>(cells[1], "blocking_probability_so_far");
    s.cumulative_packets = parse_field<std::uint64_t>(cells[2], "cumulative_packets");
    s.utilization = parse_field<double>(cells[3], "utilization");
    s.mean_delay = parse_field<double>(cells[4], "mean_delay_so_far");
    s.probes_sent = parse_field<std::uint64_t>(cells[5], "probes_sent");
    out.push_back(s);
  }
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace rftr
