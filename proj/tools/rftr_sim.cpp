// Command-line front end for the WDM fault-tolerant routing simulator.
//
//   rftr_sim run      --config scenario.cfg --out results/ [--seed N]... [--router rftr|baseline|both]
//   rftr_sim sweep    --config sweep.cfg --out results/
//   rftr_sim validate --config scenario.cfg [--topology net.topo]

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rftr/error.hpp"
#include "rftr/scenario.hpp"

namespace {

struct Options {
  std::string config;
  std::string topology;
  std::string out = "out";
  std::vector<std::uint64_t> seeds;
  std::string router;
  std::uint32_t workers = 0;
};

rftr::Scenario build_scenario(const Options& opt) {
  rftr::Scenario s = opt.config.empty() ? rftr::parse_config("") : rftr::load_config(opt.config);
  if (!opt.topology.empty()) s.topology_file = opt.topology;
  if (!opt.seeds.empty()) s.seeds = opt.seeds;
  if (!opt.router.empty()) {
    if (opt.router == "rftr") {
      s.routers = {rftr::RouterKind::kRftr};
    } else if (opt.router == "baseline") {
      s.routers = {rftr::RouterKind::kBaseline};
    } else {
      s.routers = {rftr::RouterKind::kRftr, rftr::RouterKind::kBaseline};
    }
  }
  if (opt.workers > 0) s.workers = opt.workers;
  return s;
}

void add_common(CLI::App* cmd, Options& opt, bool outputs) {
  cmd->add_option("--config", opt.config, "Scenario file (key = value lines)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--topology", opt.topology, "Topology file; overrides the config")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opt.seeds, "Seed; repeat for several runs");
  cmd->add_option("--router", opt.router, "Router to run")
      ->check(CLI::IsMember({"rftr", "baseline", "both"}));
  if (outputs) {
    cmd->add_option("--out", opt.out, "Output directory for CSV files");
    cmd->add_option("--workers", opt.workers, "Worker threads");
  }
}

int report_written(const rftr::ScenarioResult& result) {
  for (const auto& row : result.summary_rows) {
    std::cout << row.router << " rate_mbps=" << row.rate << " sources=" << row.sources
              << " blocking=" << row.blocking_probability
              << " packets=" << row.packets_received << " delay=" << row.mean_delay
              << " utilization=" << row.mean_utilization << " restored=" << row.restored
              << " dropped=" << row.dropped << '\n';
  }
  for (const auto& path : result.artifacts) std::cout << "wrote " << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reliable fault-tolerant routing simulator for optical WDM networks"};
  app.require_subcommand(1);
  Options opt;

  auto* run = app.add_subcommand("run", "Run one scenario (sweep settings ignored)");
  add_common(run, opt, true);
  auto* sweep = app.add_subcommand("sweep", "Run the scenario's rate or sources sweep");
  add_common(sweep, opt, true);
  auto* check = app.add_subcommand("validate", "Check a scenario without running it");
  add_common(check, opt, false);

  CLI11_PARSE(app, argc, argv);

  try {
    rftr::Scenario scenario = build_scenario(opt);
    if (*check) {
      auto diags = rftr::validate(scenario);
      std::cout << rftr::format_diagnostics(diags);
      for (const auto& d : diags) {
        if (d.severity == rftr::Diagnostic::Severity::kError) return 1;
      }
      return 0;
    }
    if (*run) {
      scenario.sweep = rftr::SweepKind::kNone;
      scenario.sweep_values.clear();
    } else if (scenario.sweep == rftr::SweepKind::kNone) {
      std::cerr << "error: sweep needs 'sweep = rate|sources' and 'sweep_values' in the config\n";
      return 1;
    }
    return report_written(rftr::run_scenario(scenario, opt.out));
  } catch (const rftr::Error& e) {
    std::cerr << "error: " << rftr::to_string(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
