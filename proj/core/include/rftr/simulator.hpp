#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "rftr/connection.hpp"
#include "rftr/event_queue.hpp"
#include "rftr/metrics.hpp"
#include "rftr/probing.hpp"
#include "rftr/routing.hpp"
#include "rftr/topology.hpp"
#include "rftr/traffic.hpp"

namespace rftr {

struct LinkEventSpec {
  double time = 0.0;
  LinkId link;

  bool operator==(const LinkEventSpec&) const = default;
};

struct SimConfig {
  Topology topology = default_topology();
  Router router;
  ProbePolicy probes;
  TrafficModel traffic;
  std::size_t candidate_count = 3;  // k
  std::size_t backup_count = 0;     // m; 0 means "same as k"
  std::vector<LinkEventSpec> failures;
  std::vector<LinkEventSpec> repairs;
  std::uint32_t random_failures = 0;  // extra single-link failures drawn from the seed
  std::vector<Arrival> scripted;      // offered in addition to generated demands
  std::size_t max_requests = 50;     // generated demands; may be 0 when scripted is set
  double sample_interval = 0.5;
  std::uint64_t seed = 1;

  std::size_t effective_backup_count() const {
    return backup_count == 0 ? candidate_count : backup_count;
  }

  // Throws kRange / kValidation naming the offending field.
  void validate() const;

  bool operator==(const SimConfig&) const = default;
};

// `count` failures at times uniform in (0, horizon), links uniform over the topology.
std::vector<LinkEventSpec> random_failure_schedule(const Topology& topo,
                                                   std::uint32_t count, double horizon,
                                                   std::mt19937_64& rng);

class Simulator {
 public:
  using Observer = std::function<void(const Simulator&, const Event&)>;

  explicit Simulator(SimConfig config);

  // Dispatches one event. Returns false once the queue has drained.
  bool step();
  MetricsReport run();

  // Called after every dispatched event.
  void set_observer(Observer observer) { observer_ = std::move(observer); }

  double now() const { return now_; }
  const SimConfig& config() const { return config_; }
  const Topology& topology() const { return topo_; }
  std::span<const Connection> connections() const { return connections_; }
  const Connection& connection(ConnectionId id) const { return connections_.at(id.value); }
  std::span<const Arrival> arrivals() const { return arrivals_; }
  std::span<const LinkEventSpec> failure_schedule() const { return failures_; }

  MetricsReport report() const;

 private:
  void schedule(double time, EventKind kind);

  void on(const event::Arrival& e);
  void on(const event::Departure& e);
  void on(const event::ProbeSend& e);
  void on(const event::FeedbackArrive& e);
  void on(const event::WindowClose& e);
  void on(const event::LinkFailure& e);
  void on(const event::LinkRepair& e);
  void on(const event::SampleTick& e);

  void start_backup_tracking(Connection& c);
  void open_windows(Connection& c);
  void close_segment(Connection& c);
  LightpathId next_lightpath() { return LightpathId(++lightpath_counter_); }
  TimeSample sample() const;

  SimConfig config_;
  Topology topo_;
  EventQueue queue_;
  std::vector<Arrival> arrivals_;
  std::vector<LinkEventSpec> failures_;
  std::vector<Connection> connections_;
  Observer observer_;

  double now_ = 0.0;
  std::size_t pending_non_tick_ = 0;
  std::uint64_t lightpath_counter_ = 0;

  std::uint64_t offered_ = 0;
  std::uint64_t accepted_ = 0;
  std::uint64_t blocked_ = 0;
  std::uint64_t completed_ = 0;
  std::uint64_t restored_ = 0;
  std::uint64_t dropped_ = 0;
  std::uint64_t probes_sent_ = 0;
  std::uint64_t probe_acks_ = 0;
  std::uint64_t probe_nacks_ = 0;
  std::vector<TimeSample> series_;
};

// Convenience wrapper: one full run.
MetricsReport run(const SimConfig& config);

}  // namespace rftr
