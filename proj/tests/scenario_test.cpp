#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rftr/error.hpp"
#include "rftr/scenario.hpp"

namespace rftr {
namespace {

namespace fs = std::filesystem;

ErrorCode parse_error(std::string_view doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << doc;
  return ErrorCode::kIo;
}

TEST(ParseConfig, EmptyDocumentGivesDefaults) {
  Scenario s = parse_config("");
  EXPECT_EQ(s, Scenario{});
  EXPECT_EQ(s.wavelengths, 8u);
  EXPECT_EQ(s.link_delay_ms, 10.0);
  EXPECT_EQ(s.sim.router.conversion_time, 0.024);
  EXPECT_EQ(s.sim.sample_interval, 0.5);
  EXPECT_EQ(s.sim.traffic.arrival_rate, 0.5);
  EXPECT_EQ(s.sim.traffic.mean_holding, 0.2);
  EXPECT_EQ(s.sim.traffic.packet_size, 200u);
  EXPECT_EQ(s.sim.traffic.num_sources, 4u);
  EXPECT_EQ(s.sim.max_requests, 50u);
  EXPECT_EQ(s.sim.router.cost.load_threshold, 0.3);
}

TEST(ParseConfig, SingleOverrideChangesOnlyThatField) {
  Scenario s = parse_config("# more channels\nwavelengths = 16\n");
  Scenario expected;
  expected.wavelengths = 16;
  EXPECT_EQ(s, expected);
  EXPECT_EQ(scenario_topology(s).link(LinkId(0)).channels, 16u);
}

TEST(ParseConfig, EveryKeyIsRecognised) {
  Scenario s = parse_config(
      "name = full\nrouter = both\nwavelengths = 4\nlink_delay_ms = 5\n"
      "conversion = full\nconversion_time = 0.01\nconversion_factor = 2\n"
      "conversion_distance = 3\nsample_interval = 0.25\narrival_rate = 2\n"
      "holding_time = 1\npacket_size = 100\ndata_rate_mbps = 4\nsession_traffics = 2\n"
      "max_requests = 20\nload_threshold = 0.5\ncandidate_paths = 2\nbackup_paths = 1\n"
      "probes_per_interval = 10\nprobe_interval = 0.25\nprobe_adaptive_scale = 0\n"
      "failures = 1.5:3, 2:4\nrepairs = 3:3\nrandom_failures = 1\nsweep = rate\n"
      "sweep_values = 2,4\nseeds = 1,2,3\nworkers = 2\n");
  EXPECT_EQ(s.name, "full");
  EXPECT_EQ(s.routers.size(), 2u);
  EXPECT_EQ(s.sim.router.mode, ConversionMode::kFull);
  EXPECT_EQ(s.sim.traffic.data_rate, 4e6);
  EXPECT_EQ(s.sim.traffic.num_sources, 2u);
  EXPECT_EQ(s.sim.failures.size(), 2u);
  EXPECT_EQ(s.sim.failures[0], (LinkEventSpec{1.5, LinkId(3)}));
  EXPECT_EQ(s.sim.repairs.size(), 1u);
  EXPECT_EQ(s.sim.effective_backup_count(), 1u);
  EXPECT_EQ(s.seeds, (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(s.sweep, SweepKind::kRate);
  EXPECT_EQ(s.workers, 2u);
}

TEST(ParseConfig, Errors) {
  EXPECT_EQ(parse_error("load_threshold = 1.5\n"), ErrorCode::kRange);
  EXPECT_EQ(parse_error("load_threshold = 0\n"), ErrorCode::kRange);
  EXPECT_EQ(parse_error("wavelenghts = 16\n"), ErrorCode::kParse);
  EXPECT_EQ(parse_error("wavelengths = 8\nwavelengths = 16\n"), ErrorCode::kParse);
  EXPECT_EQ(parse_error("wavelengths 16\n"), ErrorCode::kParse);
  EXPECT_EQ(parse_error("wavelengths = sixteen\n"), ErrorCode::kParse);
  EXPECT_EQ(parse_error("router = dpbr\n"), ErrorCode::kParse);
  EXPECT_EQ(parse_error("sweep = rate\n"), ErrorCode::kParse);
  EXPECT_EQ(parse_error("sweep = rate\nsweep_values = 4, 2\n"), ErrorCode::kRange);
  EXPECT_EQ(parse_error("sweep = sources\nsweep_values = 1.5\n"), ErrorCode::kRange);
  EXPECT_EQ(parse_error("arrival_rate = -1\n"), ErrorCode::kRange);
  try {
    parse_config("wavelenghts = 16\n");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("wavelenghts"), std::string::npos);
  }
}

TEST(ExpandRuns, RateSweepBothRoutersFiveSeeds) {
  Scenario s = parse_config(
      "router = both\nsweep = rate\nsweep_values = 2,4,6,8\nseeds = 1,2,3,4,5\n");
  auto runs = expand_runs(s);
  ASSERT_EQ(runs.size(), 40u);
  EXPECT_EQ(runs.front().run_id, "default_rftr_rate2_s1");
  EXPECT_EQ(runs.back().run_id, "default_baseline_rate8_s5");
  EXPECT_EQ(runs[5].config.traffic.data_rate, 4e6);
  ScenarioResult r = execute_scenario(s);
  EXPECT_EQ(r.runs.size(), 40u);
  EXPECT_EQ(r.summary_rows.size(), 8u);
  for (const auto& row : r.summary_rows) EXPECT_EQ(row.runs, 5.0);
}

TEST(ExpandRuns, SourcesSweepFourRowsPerRouter) {
  Scenario s = parse_config("router = both\nsweep = sources\nsweep_values = 1,2,3,4\n");
  ScenarioResult r = execute_scenario(s);
  ASSERT_EQ(r.summary_rows.size(), 8u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(r.summary_rows[i].router, "rftr");
    EXPECT_EQ(r.summary_rows[i].sources, static_cast<double>(i + 1));
    EXPECT_EQ(r.summary_rows[i + 4].router, "baseline");
  }
}

TEST(ExpandRuns, ParallelWorkersMatchSerial) {
  Scenario s = parse_config(
      "router = both\nsweep = sources\nsweep_values = 1,4\nseeds = 1,2,3\n"
      "random_failures = 1\narrival_rate = 3\n");
  ScenarioResult serial = execute_scenario(s);
  s.workers = 4;
  ScenarioResult parallel = execute_scenario(s);
  EXPECT_EQ(serial.run_rows, parallel.run_rows);
  EXPECT_EQ(serial.summary_rows, parallel.summary_rows);
}

TEST(Validate, Diagnostics) {
  EXPECT_EQ(format_diagnostics(validate(parse_config(""))), "valid\n");

  auto diags = validate(parse_config("failures = 1:99\n"));
  ASSERT_FALSE(diags.empty());
  EXPECT_EQ(diags[0].severity, Diagnostic::Severity::kError);
  EXPECT_EQ(diags[0].message, "unknown link 99");

  fs::path dir = fs::temp_directory_path() / "rftr_validate_test";
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "split.topo");
    out << "nodes 4\nlink 0 1 10 8\nlink 2 3 10 8\n";
  }
  Scenario split = parse_config("topology = split.topo\n", dir);
  auto w = validate(split);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].severity, Diagnostic::Severity::kWarning);
  EXPECT_NE(format_diagnostics(w).find("valid"), std::string::npos);
  fs::remove_all(dir);
}

#ifdef RFTR_SIM_PATH

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(RFTR_SIM_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rftr_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path write_config(const std::string& body) {
    fs::path p = dir_ / "scenario.cfg";
    std::ofstream(p) << body;
    return p;
  }
  fs::path dir_;
};

TEST_F(CliTest, SingleRunWritesOneSummaryRowAndOneSeries) {
  fs::path cfg = write_config("name = single\n");
  ASSERT_EQ(run_cli("run --config " + cfg.string() + " --out " + (dir_ / "out").string()), 0);
  std::string summary = slurp(dir_ / "out" / "summary.csv");
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 2);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "timeseries_single_rftr_s1.csv"));
}

TEST_F(CliTest, SameScenarioTwiceIsByteIdentical) {
  fs::path cfg = write_config(
      "name = twice\nrouter = both\nsweep = rate\nsweep_values = 2,4\nseeds = 1,2\n"
      "random_failures = 1\nworkers = 3\n");
  ASSERT_EQ(run_cli("sweep --config " + cfg.string() + " --out " + (dir_ / "a").string()), 0);
  ASSERT_EQ(run_cli("sweep --config " + cfg.string() + " --workers 1 --out " +
                    (dir_ / "b").string()),
            0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir_ / "a")) {
    ++files;
    EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "b" / entry.path().filename()))
        << entry.path().filename();
  }
  EXPECT_EQ(files, 10u);  // summary, runs, 8 time series
}

TEST_F(CliTest, ErrorsExitNonZeroWithoutSummary) {
  fs::path cfg = write_config("load_threshold = 1.5\n");
  EXPECT_NE(run_cli("run --config " + cfg.string() + " --out " + (dir_ / "out").string()), 0);
  EXPECT_FALSE(fs::exists(dir_ / "out" / "summary.csv"));

  cfg = write_config("failures = 1:99\n");
  EXPECT_NE(run_cli("run --config " + cfg.string() + " --out " + (dir_ / "out").string()), 0);
  EXPECT_FALSE(fs::exists(dir_ / "out" / "summary.csv"));
  EXPECT_NE(run_cli("validate --config " + cfg.string()), 0);

  cfg = write_config("name = nosweep\n");
  EXPECT_NE(run_cli("sweep --config " + cfg.string() + " --out " + (dir_ / "out").string()), 0);
  EXPECT_NE(run_cli("run --config " + (dir_ / "absent.cfg").string()), 0);
  EXPECT_NE(run_cli("frobnicate"), 0);
}

TEST_F(CliTest, ValidateAcceptsDefaults) {
  fs::path cfg = write_config("");
  EXPECT_EQ(run_cli("validate --config " + cfg.string()), 0);
  EXPECT_EQ(run_cli("validate --topology " RFTR_DATA_DIR "/default_8node.topo"), 0);
}

#endif

}  // namespace
}  // namespace rftr
