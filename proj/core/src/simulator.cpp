#include "rftr/simulator.hpp"

#include <algorithm>

#include "rftr/error.hpp"

namespace rftr {

void SimConfig::validate() const {
  router.cost.validate();
  probes.validate();
  traffic.validate();
  if (topology.node_count() < 2) {
    throw Error(ErrorCode::kValidation, "topology needs at least two nodes");
  }
  if (max_requests < 1 && scripted.empty()) {
    throw Error(ErrorCode::kRange, "max_requests must be >= 1");
  }
  if (random_failures > 0 && max_requests < 1) {
    throw Error(ErrorCode::kRange, "random_failures needs generated demands");
  }
  if (!(sample_interval > 0.0)) {
    throw Error(ErrorCode::kRange, "sample_interval must be positive");
  }
  if (candidate_count < 1) throw Error(ErrorCode::kRange, "candidate_paths must be >= 1");
  if (router.conversion_time < 0.0) {
    throw Error(ErrorCode::kRange, "conversion_time must be non-negative");
  }
  auto check_links = [&](const std::vector<LinkEventSpec>& events, const char* what) {
    for (const LinkEventSpec& f : events) {
      if (!topology.has_link(f.link)) {
        throw Error(ErrorCode::kValidation, std::string(what) + " names unknown link " +
                                                std::to_string(f.link.value));
      }
      if (!(f.time >= 0.0)) {
        throw Error(ErrorCode::kRange, std::string(what) + " time must be >= 0");
      }
    }
  };
  check_links(failures, "failure schedule");
  check_links(repairs, "repair schedule");
  for (const Arrival& a : scripted) {
    if (!topology.has_node(a.src) || !topology.has_node(a.dst) || a.src == a.dst) {
      throw Error(ErrorCode::kValidation, "scripted demand has invalid endpoints");
    }
  }
}

std::vector<LinkEventSpec> random_failure_schedule(const Topology& topo,
                                                   std::uint32_t count, double horizon,
                                                   std::mt19937_64& rng) {
  std::vector<LinkEventSpec> out;
  if (topo.link_count() == 0) return out;
  std::uniform_real_distribution<double> when(0.0, horizon);
  std::uniform_int_distribution<std::uint32_t> which(
      0, static_cast<std::uint32_t>(topo.link_count() - 1));
  for (std::uint32_t i = 0; i < count; ++i) {
    double t = when(rng);
    out.push_back({t, LinkId(which(rng))});
  }
  return out;
}

Simulator::Simulator(SimConfig config) : config_(std::move(config)) {
  config_.validate();
  topo_ = config_.topology;

  RandomStreams streams(config_.seed);
  arrivals_ = generate_arrivals(config_.traffic, topo_.node_count(),
                                config_.max_requests, streams);
  arrivals_.insert(arrivals_.end(), config_.scripted.begin(), config_.scripted.end());
  std::stable_sort(arrivals_.begin(), arrivals_.end(),
                   [](const Arrival& x, const Arrival& y) { return x.time < y.time; });

  failures_ = config_.failures;
  if (config_.random_failures > 0) {
    auto rng = streams.stream(RandomStreams::kFailures);
    double horizon =
        static_cast<double>(config_.max_requests) / config_.traffic.aggregate_rate();
    auto extra = random_failure_schedule(topo_, config_.random_failures, horizon, rng);
    failures_.insert(failures_.end(), extra.begin(), extra.end());
  }

  // Link events go in first so they precede demands scheduled for the same instant.
  for (const LinkEventSpec& f : failures_) schedule(f.time, event::LinkFailure{f.link});
  for (const LinkEventSpec& r : config_.repairs) schedule(r.time, event::LinkRepair{r.link});
  for (std::size_t i = 0; i < arrivals_.size(); ++i) {
    schedule(arrivals_[i].time, event::Arrival{i});
  }
  schedule(config_.sample_interval, event::SampleTick{});
}

void Simulator::schedule(double time, EventKind kind) {
  if (!std::holds_alternative<event::SampleTick>(kind)) ++pending_non_tick_;
  queue_.push(time, std::move(kind));
}

bool Simulator::step() {
  if (queue_.empty()) return false;
  Event e = queue_.pop();
  if (!std::holds_alternative<event::SampleTick>(e.kind)) --pending_non_tick_;
  now_ = e.time;
  std::visit([this](const auto& ev) { on(ev); }, e.kind);
  if (observer_) observer_(*this, e);
  return true;
}

MetricsReport Simulator::run() {
  while (step()) {
  }
  return report();
}

void Simulator::on(const event::Arrival& e) {
  const Arrival& a = arrivals_[e.request];
  ++offered_;
  Connection c;
  c.id = ConnectionId(connections_.size());
  c.src = a.src;
  c.dst = a.dst;
  c.arrival = now_;
  c.holding = a.holding;

  RouteResult result = config_.router.establish(topo_, a.src, a.dst, next_lightpath());
  if (result.blocked()) {
    c.state = ConnectionState::kBlocked;
    ++blocked_;
    connections_.push_back(std::move(c));
    return;
  }
  ++accepted_;
  c.state = ConnectionState::kActive;
  c.primary = result.lightpath;
  c.current = result.lightpath;
  c.setup_delay = result.setup_delay;
  c.segment_start = now_;
  schedule(now_ + c.holding, event::Departure{c.id});
  connections_.push_back(std::move(c));
  start_backup_tracking(connections_.back());
}

void Simulator::start_backup_tracking(Connection& c) {
  c.candidates = candidate_paths(topo_, c.src, c.dst, c.current->path,
                                 config_.candidate_count);
  c.backups = hop_order_ranking(c.candidates, config_.effective_backup_count());
  c.last_estimates.clear();
  c.probes_per_candidate.assign(c.candidates.paths.size(), 0);
  c.windows.clear();
  ++c.epoch;
  if (config_.router.kind == RouterKind::kRftr && !c.candidates.paths.empty()) {
    open_windows(c);
  }
}

void Simulator::open_windows(Connection& c) {
  ++c.epoch;
  c.windows.clear();
  const double rate = config_.traffic.aggregate_rate();
  for (std::size_t j = 0; j < c.candidates.paths.size(); ++j) {
    c.windows.emplace_back(j, c.epoch, now_);
    for (const ScheduledProbe& p : emit_probes(c.windows.back(), config_.probes, rate, now_)) {
      schedule(p.time, event::ProbeSend{c.id, p.path_index, p.epoch, p.seq});
    }
  }
  schedule(now_ + config_.probes.update_interval, event::WindowClose{c.id, c.epoch});
}

void Simulator::on(const event::ProbeSend& e) {
  Connection& c = connections_[e.connection.value];
  if (!c.live() || e.epoch != c.epoch) return;
  const Path& path = c.candidates.paths[e.path_index];
  ProbeOutcome outcome = probe_outcome(topo_, path, config_.router.mode);
  ++probes_sent_;
  ++c.probes_per_candidate[e.path_index];
  schedule(now_ + 2.0 * path.propagation_delay(topo_),
           event::FeedbackArrive{e.connection, e.path_index, e.epoch, e.seq, outcome});
}

void Simulator::on(const event::FeedbackArrive& e) {
  Connection& c = connections_[e.connection.value];
  // Feedback that outlives its window (or its session) is discarded.
  if (!c.live() || e.epoch != c.epoch) return;
  c.windows[e.path_index].record(e.seq, e.outcome);
  if (e.outcome == ProbeOutcome::kPack) {
    ++probe_acks_;
  } else {
    ++probe_nacks_;
  }
}

void Simulator::on(const event::WindowClose& e) {
  Connection& c = connections_[e.connection.value];
  if (!c.live() || e.epoch != c.epoch) return;
  c.last_estimates.clear();
  for (const ProbeWindow& w : c.windows) c.last_estimates.push_back(blocking_probability(w));
  c.backups = rank_and_select(c.last_estimates, c.candidates,
                              config_.effective_backup_count());
  ++c.rankings_completed;
  // Every candidate, ranked first or not, keeps being probed.
  open_windows(c);
}

void Simulator::close_segment(Connection& c) {
  c.carried.push_back({c.segment_start, now_,
                       end_to_end_delay(topo_, *c.current, config_.router.conversion_time)});
}

void Simulator::on(const event::LinkFailure& e) {
  if (!topo_.link(e.link).up) return;
  topo_.set_link_state(e.link, false);
  for (Connection& c : connections_) {
    if (!c.live() || !c.current->path.uses(e.link)) continue;
    close_segment(c);
    release_lightpath(topo_, *c.current);
    auto lp = reroute(topo_, config_.router, c.src, c.dst, c.backups, next_lightpath());
    if (lp) {
      c.current = std::move(lp);
      c.state = ConnectionState::kRestored;
      c.segment_start = now_;
      ++restored_;
      start_backup_tracking(c);
    } else {
      c.current.reset();
      c.state = ConnectionState::kDropped;
      c.ended_at = now_;
      ++c.epoch;
      ++dropped_;
    }
  }
}

void Simulator::on(const event::LinkRepair& e) { topo_.set_link_state(e.link, true); }

void Simulator::on(const event::Departure& e) {
  Connection& c = connections_[e.connection.value];
  if (!c.live()) return;  // dropped earlier; the failure already ended the session
  close_segment(c);
  release_lightpath(topo_, *c.current);
  c.state = ConnectionState::kCompleted;
  c.ended_at = now_;
  ++c.epoch;
  ++completed_;
}

TimeSample Simulator::sample() const {
  TimeSample s;
  s.time = now_;
  s.blocking_probability =
      offered_ == 0 ? 0.0 : static_cast<double>(blocked_) / static_cast<double>(offered_);
  double weighted = 0.0;
  double carried = 0.0;
  for (const Connection& c : connections_) {
    if (c.state == ConnectionState::kBlocked) continue;
    s.cumulative_packets += packets_for(c.carried_until(now_), config_.traffic);
    for (const CarriedSegment& seg : c.carried) {
      weighted += seg.delay * (seg.end - seg.start);
      carried += seg.end - seg.start;
    }
    if (c.live()) {
      double open = std::max(0.0, now_ - c.segment_start);
      weighted += open * end_to_end_delay(topo_, *c.current, config_.router.conversion_time);
      carried += open;
    }
  }
  s.mean_delay = carried > 0.0 ? weighted / carried : 0.0;
  s.utilization = sample_utilization(topo_, now_).second;
  s.probes_sent = probes_sent_;
  return s;
}

void Simulator::on(const event::SampleTick&) {
  series_.push_back(sample());
  if (pending_non_tick_ > 0) {
    schedule(now_ + config_.sample_interval, event::SampleTick{});
  }
}

MetricsReport Simulator::report() const {
  MetricsReport r;
  r.offered = offered_;
  r.accepted = accepted_;
  r.blocked = blocked_;
  r.completed = completed_;
  r.restored = restored_;
  r.dropped = dropped_;
  r.blocking_probability =
      offered_ == 0 ? 0.0 : static_cast<double>(blocked_) / static_cast<double>(offered_);
  double weighted = 0.0;
  double carried = 0.0;
  double setup = 0.0;
  for (const Connection& c : connections_) {
    if (c.state == ConnectionState::kBlocked) continue;
    if (c.live()) ++r.active_at_end;
    r.packets_received += packets_for(c, config_.traffic);
    setup += c.setup_delay;
    for (const CarriedSegment& seg : c.carried) {
      weighted += seg.delay * (seg.end - seg.start);
      carried += seg.end - seg.start;
    }
  }
  r.mean_delay = carried > 0.0 ? weighted / carried : 0.0;
  r.mean_setup_delay = accepted_ > 0 ? setup / static_cast<double>(accepted_) : 0.0;
  double util = 0.0;
  for (const TimeSample& s : series_) util += s.utilization;
  r.mean_utilization = series_.empty() ? 0.0 : util / static_cast<double>(series_.size());
  r.probes_sent = probes_sent_;
  r.probe_acks = probe_acks_;
  r.probe_nacks = probe_nacks_;
  r.series = series_;
  return r;
}

MetricsReport run(const SimConfig& config) { return Simulator(config).run(); }

}  // namespace rftr
