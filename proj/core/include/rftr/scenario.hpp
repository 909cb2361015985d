#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rftr/metrics.hpp"
#include "rftr/routing.hpp"
#include "rftr/simulator.hpp"

namespace rftr {

enum class SweepKind : std::uint8_t { kNone, kRate, kSources };

struct Scenario {
  std::string name = "default";
  std::vector<RouterKind> routers{RouterKind::kRftr};
  std::optional<std::filesystem::path> topology_file;
  std::uint32_t wavelengths = 8;   // used when no topology file is given
  double link_delay_ms = 10.0;     // likewise
  double conversion_factor = 1.0;  // recorded, no effect
  double conversion_distance = 8.0;  // recorded, no effect
  SimConfig sim;                   // topology is filled in by build_config
  SweepKind sweep = SweepKind::kNone;
  std::vector<double> sweep_values;
  std::vector<std::uint64_t> seeds{1};
  std::uint32_t workers = 1;

  bool operator==(const Scenario&) const = default;
};

// Parses `key = value` lines (`#` starts a comment). Unspecified keys keep
// their defaults; unknown keys, malformed values and out-of-range values
// throw kParse / kRange naming the key. Topology files given relative to the
// document are resolved against `base_dir`.
Scenario parse_config(std::string_view document,
                      const std::filesystem::path& base_dir = {});
Scenario load_config(const std::filesystem::path& path);

// Resolves the topology for a scenario (file or the default mesh).
Topology scenario_topology(const Scenario& scenario);

struct RunSpec {
  RouterKind router = RouterKind::kRftr;
  double sweep_value = 0.0;
  std::uint64_t seed = 1;
  SimConfig config;
  std::string run_id;
};

// One spec per (router, sweep value, seed), ordered by that key.
std::vector<RunSpec> expand_runs(const Scenario& scenario);

struct Diagnostic {
  enum class Severity { kError, kWarning } severity;
  std::string message;
};

// Never throws; problems come back as diagnostics.
std::vector<Diagnostic> validate(const Scenario& scenario);
std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics);

struct RunOutput {
  RunSpec spec;
  MetricsReport report;
};

struct ScenarioResult {
  std::vector<RunOutput> runs;
  std::vector<SummaryRow> run_rows;
  std::vector<SummaryRow> summary_rows;  // one per (router, sweep value)
  std::vector<std::filesystem::path> artifacts;
};

// Executes every run (on `scenario.workers` threads), then writes
// summary.csv, runs.csv and one timeseries_<run-id>.csv per run into
// out_dir. Nothing is written unless every run succeeds.
ScenarioResult run_scenario(const Scenario& scenario,
                            const std::filesystem::path& out_dir);

// Same runs without touching the filesystem.
ScenarioResult execute_scenario(const Scenario& scenario);

}  // namespace rftr
