#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rftr/ids.hpp"

namespace rftr {

struct TrafficModel {
  double arrival_rate = 0.5;     // calls per second, per source
  double mean_holding = 0.2;     // seconds
  std::uint32_t num_sources = 4;
  std::uint32_t packet_size = 200;  // bytes
  double data_rate = 2e6;        // bits per second per session

  // Sources are multiplexed, so the offered call rate scales linearly.
  double aggregate_rate() const { return arrival_rate * num_sources; }

  void validate() const;

  bool operator==(const TrafficModel&) const = default;
};

struct Arrival {
  double time = 0.0;
  NodeId src;
  NodeId dst;
  double holding = 0.0;

  bool operator==(const Arrival&) const = default;
};

// Per-run randomness. Each named stream is seeded from (seed, stream) so
// adding draws to one stream never shifts another.
class RandomStreams {
 public:
  explicit RandomStreams(std::uint64_t seed) : seed_(seed) {}

  std::mt19937_64 stream(std::uint32_t id) const;

  static constexpr std::uint32_t kFailures = 0x1000;

 private:
  std::uint64_t seed_;
};

// Draws `count` arrivals from one source: exponential gaps with mean
// 1 / arrival_rate, exponential holding with mean mean_holding, and (src, dst)
// uniform over ordered pairs with src != dst.
std::vector<Arrival> generate_source_arrivals(const TrafficModel& model,
                                              std::uint32_t node_count,
                                              std::size_t count,
                                              std::mt19937_64& rng);

// Merges num_sources independent sources and keeps the first max_requests
// arrivals in time order.
std::vector<Arrival> generate_arrivals(const TrafficModel& model,
                                       std::uint32_t node_count,
                                       std::size_t max_requests,
                                       const RandomStreams& streams);

}  // namespace rftr
