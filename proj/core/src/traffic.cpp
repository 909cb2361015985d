#include "rftr/traffic.hpp"

#include <algorithm>
#include <tuple>

#include "rftr/error.hpp"

namespace rftr {

void TrafficModel::validate() const {
  if (!(arrival_rate > 0.0)) throw Error(ErrorCode::kRange, "arrival_rate must be positive");
  if (!(mean_holding > 0.0)) throw Error(ErrorCode::kRange, "holding_time must be positive");
  if (num_sources == 0) throw Error(ErrorCode::kRange, "session_traffics must be positive");
  if (packet_size == 0) throw Error(ErrorCode::kRange, "packet_size must be positive");
  if (!(data_rate > 0.0)) throw Error(ErrorCode::kRange, "data_rate_mbps must be positive");
}

std::mt19937_64 RandomStreams::stream(std::uint32_t id) const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed_),
                    static_cast<std::uint32_t>(seed_ >> 32), id};
  return std::mt19937_64(seq);
}

std::vector<Arrival> generate_source_arrivals(const TrafficModel& model,
                                              std::uint32_t node_count,
                                              std::size_t count,
                                              std::mt19937_64& rng) {
  std::vector<Arrival> out;
  if (node_count < 2) return out;
  out.reserve(count);
  std::exponential_distribution<double> gap(model.arrival_rate);
  std::exponential_distribution<double> hold(1.0 / model.mean_holding);
  std::uniform_int_distribution<std::uint32_t> pair(0, node_count * (node_count - 1) - 1);
  double t = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    t += gap(rng);
    std::uint32_t p = pair(rng);
    std::uint32_t src = p / (node_count - 1);
    std::uint32_t dst = p % (node_count - 1);
    if (dst >= src) ++dst;
    out.push_back({t, NodeId(src), NodeId(dst), hold(rng)});
  }
  return out;
}

std::vector<Arrival> generate_arrivals(const TrafficModel& model,
                                       std::uint32_t node_count,
                                       std::size_t max_requests,
                                       const RandomStreams& streams) {
  std::vector<std::pair<std::uint32_t, Arrival>> merged;
  merged.reserve(max_requests * model.num_sources);
  for (std::uint32_t s = 0; s < model.num_sources; ++s) {
    auto rng = streams.stream(s);
    for (const Arrival& a : generate_source_arrivals(model, node_count, max_requests, rng)) {
      merged.emplace_back(s, a);
    }
  }
  std::sort(merged.begin(), merged.end(), [](const auto& x, const auto& y) {
    return std::tie(x.second.time, x.first) < std::tie(y.second.time, y.first);
  });
  std::vector<Arrival> out;
  out.reserve(max_requests);
  for (std::size_t i = 0; i < merged.size() && i < max_requests; ++i) {
    out.push_back(merged[i].second);
  }
  return out;
}

}  // namespace rftr
