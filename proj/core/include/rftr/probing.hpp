#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rftr/ids.hpp"
#include "rftr/routing.hpp"
#include "rftr/topology.hpp"

namespace rftr {

struct CandidateSet {
  NodeId src;
  NodeId dst;
  std::vector<Path> paths;  // hop order, pairwise distinct, link-disjoint from the primary
};

// Up to k loop-free src->dst paths sharing no link with `primary`, ordered by
// hop count then node sequence (Yen's algorithm on unit costs). Link state and
// occupancy are ignored; admissibility is what the probes measure.
CandidateSet candidate_paths(const Topology& topo, NodeId src, NodeId dst,
                             const Path& primary, std::size_t k);

struct ProbePolicy {
  std::uint32_t probes_per_interval = 20;
  double update_interval = 0.5;  // seconds
  double adaptive_scale = 1.0;

  void validate() const;

  // max(1, floor(probes / (1 + scale * rate))), non-increasing in rate.
  std::uint32_t effective_count(double arrival_rate) const;

  bool operator==(const ProbePolicy&) const = default;
};

enum class ProbeOutcome : std::uint8_t { kPack, kNack };

// A probe is acknowledged iff every hop is up and a wavelength assignment
// would succeed right now. Never touches channel state.
ProbeOutcome probe_outcome(const Topology& topo, const Path& path,
                           ConversionMode mode);

// Probe bookkeeping for one candidate path over one update interval.
class ProbeWindow {
 public:
  ProbeWindow() = default;
  ProbeWindow(std::size_t path_index, std::uint64_t epoch, double start)
      : path_index_(path_index), epoch_(epoch), start_(start) {}

  // Allocates the next sequence number; counts the probe as sent.
  std::uint64_t issue();

  // Throws kUnknownSequence for a seq this window never issued and
  // kDuplicateFeedback for a seq that already has feedback.
  void record(std::uint64_t seq, ProbeOutcome outcome);

  bool issued(std::uint64_t seq) const { return seq < state_.size(); }

  std::size_t path_index() const { return path_index_; }
  std::uint64_t epoch() const { return epoch_; }
  double start() const { return start_; }
  std::uint64_t sent() const { return state_.size(); }
  std::uint64_t acked() const { return acked_; }
  std::uint64_t nacked() const { return nacked_; }
  std::uint64_t next_seq() const { return state_.size(); }

 private:
  enum class Slot : std::uint8_t { kPending, kAcked, kNacked };

  std::size_t path_index_ = 0;
  std::uint64_t epoch_ = 0;
  double start_ = 0.0;
  std::vector<Slot> state_;
  std::uint64_t acked_ = 0;
  std::uint64_t nacked_ = 0;
};

struct ScheduledProbe {
  double time;
  std::size_t path_index;
  std::uint64_t epoch;
  std::uint64_t seq;
};

// Issues the policy's effective probe count, spaced evenly across
// [now, now + update_interval).
std::vector<ScheduledProbe> emit_probes(ProbeWindow& window,
                                        const ProbePolicy& policy,
                                        double arrival_rate, double now);

struct BlockingEstimate {
  std::size_t path_index = 0;
  double bp = 1.0;
  std::uint64_t sample_size = 0;

  bool operator==(const BlockingEstimate&) const = default;
};

// NACKed fraction of the resolved probes; 1.0 when nothing was resolved.
BlockingEstimate blocking_probability(const ProbeWindow& window);

struct RankedPath {
  std::size_t index = 0;  // position in the CandidateSet
  Path path;
  double bp = 1.0;

  bool operator==(const RankedPath&) const = default;
};

// Ascending bp, then fewer hops, then node sequence; the first m survive.
// Estimates are matched to candidates by path_index.
std::vector<RankedPath> rank_and_select(std::span<const BlockingEstimate> estimates,
                                        const CandidateSet& candidates,
                                        std::size_t m);

// Ranking used before any window has closed, and by the baseline router.
std::vector<RankedPath> hop_order_ranking(const CandidateSet& candidates,
                                          std::size_t m);

// Tries each backup in order, skipping any with a down hop or no wavelength.
// When the list is exhausted a fresh route is attempted with `router`.
// nullopt means the connection is dropped.
std::optional<Lightpath> reroute(Topology& topo, const Router& router, NodeId src,
                                 NodeId dst, std::span<const RankedPath> backups,
                                 LightpathId id);

}  // namespace rftr
