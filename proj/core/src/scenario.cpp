#include "rftr/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "rftr/error.hpp"

namespace rftr {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            const std::string& why) {
  throw Error(ErrorCode::kParse, "key '" + std::string(key) + "': " + why + " ('" +
                                     std::string(value) + "')");
}

[[noreturn]] void out_of_range(std::string_view key, const std::string& why) {
  throw Error(ErrorCode::kRange, "key '" + std::string(key) + "': " + why);
}

template <typename T>
T number(std::string_view key, std::string_view value) {
  T v{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    bad_value(key, value, "not a number");
  }
  return v;
}

double positive(std::string_view key, std::string_view value) {
  double v = number<double>(key, value);
  if (!(v > 0.0)) out_of_range(key, "must be positive");
  return v;
}

template <typename T>
T positive_int(std::string_view key, std::string_view value) {
  T v = number<T>(key, value);
  if (v == 0) out_of_range(key, "must be positive");
  return v;
}

std::vector<std::string_view> list_items(std::string_view value) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t pos = value.find(',', start);
    if (pos == std::string_view::npos) pos = value.size();
    auto item = trim(value.substr(start, pos - start));
    if (!item.empty()) out.push_back(item);
    start = pos + 1;
  }
  return out;
}

std::vector<LinkEventSpec> link_events(std::string_view key, std::string_view value) {
  std::vector<LinkEventSpec> out;
  for (std::string_view item : list_items(value)) {
    auto colon = item.find(':');
    if (colon == std::string_view::npos) bad_value(key, item, "expected <time>:<link>");
    double t = number<double>(key, trim(item.substr(0, colon)));
    if (!(t >= 0.0)) out_of_range(key, "event time must be >= 0");
    auto link = number<std::uint32_t>(key, trim(item.substr(colon + 1)));
    out.push_back({t, LinkId(link)});
  }
  return out;
}

std::string run_id(const Scenario& s, RouterKind router, double value,
                   std::uint64_t seed) {
  std::string id = s.name + "_" + to_string(router);
  if (s.sweep == SweepKind::kRate) id += "_rate" + format_double(value);
  if (s.sweep == SweepKind::kSources) id += "_sources" + format_double(value);
  id += "_s" + std::to_string(seed);
  return id;
}

}  // namespace

Scenario parse_config(std::string_view document, const std::filesystem::path& base_dir) {
  Scenario s;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= document.size()) {
    std::size_t eol = document.find('\n', pos);
    if (eol == std::string_view::npos) eol = document.size();
    std::string_view line = document.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (seen.count(key)) {
      throw Error(ErrorCode::kParse, "key '" + std::string(key) + "' given twice");
    }
    seen.emplace(std::string(key), line_no);

    SimConfig& sim = s.sim;
    if (key == "name") {
      if (value.empty() || value.find_first_of(",;/\\ \t") != std::string_view::npos) {
        bad_value(key, value, "must be non-empty without separators or spaces");
      }
      s.name = std::string(value);
    } else if (key == "router") {
      if (value == "rftr") {
        s.routers = {RouterKind::kRftr};
      } else if (value == "baseline") {
        s.routers = {RouterKind::kBaseline};
      } else if (value == "both") {
        s.routers = {RouterKind::kRftr, RouterKind::kBaseline};
      } else {
        bad_value(key, value, "expected rftr, baseline or both");
      }
    } else if (key == "topology") {
      std::filesystem::path p{std::string(value)};
      s.topology_file = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    } else if (key == "wavelengths") {
      s.wavelengths = positive_int<std::uint32_t>(key, value);
    } else if (key == "link_delay_ms") {
      s.link_delay_ms = positive(key, value);
    } else if (key == "conversion") {
      if (value == "none") {
        sim.router.mode = ConversionMode::kNone;
      } else if (value == "full") {
        sim.router.mode = ConversionMode::kFull;
      } else {
        bad_value(key, value, "expected none or full");
      }
    } else if (key == "conversion_time") {
      sim.router.conversion_time = number<double>(key, value);
      if (sim.router.conversion_time < 0.0) out_of_range(key, "must be >= 0");
    } else if (key == "conversion_factor") {
      s.conversion_factor = number<double>(key, value);
    } else if (key == "conversion_distance") {
      s.conversion_distance = number<double>(key, value);
    } else if (key == "sample_interval") {
      sim.sample_interval = positive(key, value);
    } else if (key == "arrival_rate") {
      sim.traffic.arrival_rate = positive(key, value);
    } else if (key == "holding_time") {
      sim.traffic.mean_holding = positive(key, value);
    } else if (key == "packet_size") {
      sim.traffic.packet_size = positive_int<std::uint32_t>(key, value);
    } else if (key == "data_rate_mbps") {
      sim.traffic.data_rate = positive(key, value) * 1e6;
    } else if (key == "session_traffics") {
      sim.traffic.num_sources = positive_int<std::uint32_t>(key, value);
    } else if (key == "max_requests") {
      sim.max_requests = positive_int<std::size_t>(key, value);
    } else if (key == "load_threshold") {
      sim.router.cost.load_threshold = number<double>(key, value);
      if (!(sim.router.cost.load_threshold > 0.0 && sim.router.cost.load_threshold < 1.0)) {
        out_of_range(key, "must lie in (0, 1)");
      }
    } else if (key == "candidate_paths") {
      sim.candidate_count = positive_int<std::size_t>(key, value);
    } else if (key == "backup_paths") {
      sim.backup_count = number<std::size_t>(key, value);
    } else if (key == "probes_per_interval") {
      sim.probes.probes_per_interval = positive_int<std::uint32_t>(key, value);
    } else if (key == "probe_interval") {
      sim.probes.update_interval = positive(key, value);
    } else if (key == "probe_adaptive_scale") {
      sim.probes.adaptive_scale = number<double>(key, value);
      if (!(sim.probes.adaptive_scale >= 0.0)) out_of_range(key, "must be >= 0");
    } else if (key == "failures") {
      sim.failures = link_events(key, value);
    } else if (key == "repairs") {
      sim.repairs = link_events(key, value);
    } else if (key == "random_failures") {
      sim.random_failures = number<std::uint32_t>(key, value);
    } else if (key == "sweep") {
      if (value == "none") {
        s.sweep = SweepKind::kNone;
      } else if (value == "rate") {
        s.sweep = SweepKind::kRate;
      } else if (value == "sources") {
        s.sweep = SweepKind::kSources;
      } else {
        bad_value(key, value, "expected none, rate or sources");
      }
    } else if (key == "sweep_values") {
      s.sweep_values.clear();
      for (auto item : list_items(value)) s.sweep_values.push_back(positive(key, item));
      if (s.sweep_values.empty()) out_of_range(key, "must not be empty");
      if (std::adjacent_find(s.sweep_values.begin(), s.sweep_values.end(),
                             std::greater_equal<>()) != s.sweep_values.end()) {
        out_of_range(key, "must be strictly increasing");
      }
    } else if (key == "seeds") {
      s.seeds.clear();
      for (auto item : list_items(value)) s.seeds.push_back(number<std::uint64_t>(key, item));
      if (s.seeds.empty()) out_of_range(key, "must not be empty");
    } else if (key == "workers") {
      s.workers = positive_int<std::uint32_t>(key, value);
    } else {
      throw Error(ErrorCode::kParse, "unknown key '" + std::string(key) + "'");
    }
  }
  if (s.sweep != SweepKind::kNone && s.sweep_values.empty()) {
    throw Error(ErrorCode::kParse, "key 'sweep_values': required when sweep is set");
  }
  if (s.sweep == SweepKind::kSources) {
    for (double v : s.sweep_values) {
      if (v != static_cast<double>(static_cast<std::uint32_t>(v))) {
        out_of_range("sweep_values", "source counts must be whole numbers");
      }
    }
  }
  return s;
}

Scenario load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

Topology scenario_topology(const Scenario& scenario) {
  if (scenario.topology_file) return load_topology(*scenario.topology_file);
  return default_topology(scenario.wavelengths, scenario.link_delay_ms / 1000.0);
}

std::vector<RunSpec> expand_runs(const Scenario& scenario) {
  const Topology topo = scenario_topology(scenario);
  std::vector<double> values = scenario.sweep_values;
  if (scenario.sweep == SweepKind::kNone || values.empty()) values = {0.0};
  std::vector<RunSpec> out;
  for (RouterKind router : scenario.routers) {
    for (double v : values) {
      for (std::uint64_t seed : scenario.seeds) {
        RunSpec spec;
        spec.router = router;
        spec.sweep_value = v;
        spec.seed = seed;
        spec.config = scenario.sim;
        spec.config.topology = topo;
        spec.config.router.kind = router;
        spec.config.seed = seed;
        if (scenario.sweep == SweepKind::kRate) spec.config.traffic.data_rate = v * 1e6;
        if (scenario.sweep == SweepKind::kSources) {
          spec.config.traffic.num_sources = static_cast<std::uint32_t>(v);
        }
        spec.run_id = run_id(scenario, router, v, seed);
        out.push_back(std::move(spec));
      }
    }
  }
  return out;
}

std::vector<Diagnostic> validate(const Scenario& scenario) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string m) {
    out.push_back({Diagnostic::Severity::kError, std::move(m)});
  };
  std::optional<Topology> topo;
  try {
    topo = scenario_topology(scenario);
  } catch (const std::exception& e) {
    error(std::string("topology: ") + e.what());
  }
  if (topo) {
    if (!topo->connected()) {
      out.push_back({Diagnostic::Severity::kWarning,
                     "topology is disconnected; demands across components will block"});
    }
    for (const auto* events : {&scenario.sim.failures, &scenario.sim.repairs}) {
      for (const LinkEventSpec& f : *events) {
        if (!topo->has_link(f.link)) error("unknown link " + std::to_string(f.link.value));
      }
    }
    if (topo->node_count() < 2) error("topology needs at least two nodes");
  }
  auto check = [&](auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      error(e.what());
    }
  };
  check([&] { scenario.sim.router.cost.validate(); });
  check([&] { scenario.sim.probes.validate(); });
  check([&] { scenario.sim.traffic.validate(); });
  if (scenario.sim.max_requests < 1) error("max_requests must be >= 1");
  if (!(scenario.sim.sample_interval > 0.0)) error("sample_interval must be positive");
  if (scenario.sim.candidate_count < 1) error("candidate_paths must be >= 1");
  if (scenario.seeds.empty()) error("no seeds given");
  if (scenario.routers.empty()) error("no router selected");
  if (scenario.sweep != SweepKind::kNone && scenario.sweep_values.empty()) {
    error("sweep selected without sweep_values");
  }
  return out;
}

std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  bool errors = false;
  std::string out;
  for (const Diagnostic& d : diagnostics) {
    bool is_error = d.severity == Diagnostic::Severity::kError;
    errors |= is_error;
    out += is_error ? "error: " : "warning: ";
    out += d.message;
    out += '\n';
  }
  out += errors ? "invalid\n" : "valid\n";
  return out;
}

ScenarioResult execute_scenario(const Scenario& scenario) {
  auto diags = validate(scenario);
  for (const Diagnostic& d : diags) {
    if (d.severity == Diagnostic::Severity::kError) {
      throw Error(ErrorCode::kValidation, d.message);
    }
  }
  std::vector<RunSpec> specs = expand_runs(scenario);
  std::vector<MetricsReport> reports(specs.size());
  std::vector<std::exception_ptr> errors(specs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      try {
        reports[i] = run(specs[i].config);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(std::max<std::uint32_t>(scenario.workers, 1), specs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ScenarioResult result;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    result.run_rows.push_back(summary_row(reports[i], scenario.name, specs[i].seed,
                                          to_string(specs[i].router),
                                          specs[i].config.traffic));
    result.runs.push_back({std::move(specs[i]), std::move(reports[i])});
  }
  // Runs are ordered by (router, sweep value, seed), so each group is contiguous.
  std::size_t start = 0;
  while (start < result.runs.size()) {
    std::size_t end = start;
    while (end < result.runs.size() &&
           result.runs[end].spec.router == result.runs[start].spec.router &&
           result.runs[end].spec.sweep_value == result.runs[start].spec.sweep_value) {
      ++end;
    }
    result.summary_rows.push_back(aggregate_rows(
        std::span<const SummaryRow>(result.run_rows).subspan(start, end - start)));
    start = end;
  }
  return result;
}

ScenarioResult run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir) {
  ScenarioResult result = execute_scenario(scenario);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " + ec.message());
  for (const RunOutput& r : result.runs) {
    auto path = out_dir / ("timeseries_" + r.spec.run_id + ".csv");
    write_file(path, timeseries_csv(r.report));
    result.artifacts.push_back(path);
  }
  auto runs_path = out_dir / "runs.csv";
  write_file(runs_path, summary_csv(result.run_rows));
  result.artifacts.push_back(runs_path);
  // summary.csv goes last so its presence marks a complete run.
  auto summary_path = out_dir / "summary.csv";
  write_file(summary_path, summary_csv(result.summary_rows));
  result.artifacts.push_back(summary_path);
  return result;
}

}  // namespace rftr
