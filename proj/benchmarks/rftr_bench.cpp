#include <benchmark/benchmark.h>

#include <random>

#include "rftr/probing.hpp"
#include "rftr/routing.hpp"
#include "rftr/simulator.hpp"

namespace {

using namespace rftr;

// Ring plus chords on n nodes with a fixed fraction of channels occupied.
Topology loaded_mesh(std::uint32_t n, double fill, std::uint64_t seed) {
  Topology t(n);
  for (std::uint32_t i = 0; i < n; ++i) t.add_link(NodeId(i), NodeId((i + 1) % n), 0.01, 16);
  for (std::uint32_t i = 0; i < n / 2; i += 2) {
    t.add_link(NodeId(i), NodeId(i + n / 2), 0.01, 16);
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution busy(fill);
  std::uint64_t owner = 1;
  for (std::uint32_t l = 0; l < t.link_count(); ++l) {
    for (int d = 0; d < 2; ++d) {
      for (std::uint32_t w = 0; w < 16; ++w) {
        if (busy(rng)) t.occupy(LinkId(l), Direction(d), Wavelength(w), LightpathId(owner++));
      }
    }
  }
  return t;
}

void BM_ComputePrimary(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  Topology t = loaded_mesh(n, 0.4, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_primary(t, NodeId(0), NodeId(n / 2 + 1), CostParams{}));
  }
}
BENCHMARK(BM_ComputePrimary)->Arg(8)->Arg(32)->Arg(128);

void BM_CandidatePaths(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  Topology t = loaded_mesh(n, 0.4, 2);
  auto primary = compute_primary(t, NodeId(0), NodeId(n / 2 + 1), CostParams{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(candidate_paths(t, NodeId(0), NodeId(n / 2 + 1), primary->path, 3));
  }
}
BENCHMARK(BM_CandidatePaths)->Arg(8)->Arg(32)->Arg(128);

void BM_FullRun(benchmark::State& state) {
  SimConfig cfg;
  cfg.max_requests = static_cast<std::size_t>(state.range(0));
  cfg.traffic.arrival_rate = 2.0;
  cfg.random_failures = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
}
BENCHMARK(BM_FullRun)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
