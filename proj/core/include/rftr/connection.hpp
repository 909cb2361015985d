#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rftr/ids.hpp"
#include "rftr/probing.hpp"
#include "rftr/routing.hpp"

namespace rftr {

enum class ConnectionState : std::uint8_t {
  kActive,
  kBlocked,
  kRestored,
  kDropped,
  kCompleted,
};

const char* to_string(ConnectionState state);

// A stretch of time during which one lightpath carried the session.
struct CarriedSegment {
  double start = 0.0;
  double end = 0.0;
  double delay = 0.0;  // end-to-end delay of the carrying lightpath
};

struct Connection {
  ConnectionId id;
  NodeId src;
  NodeId dst;
  double arrival = 0.0;
  double holding = 0.0;
  ConnectionState state = ConnectionState::kActive;

  std::optional<Lightpath> primary;
  std::optional<Lightpath> current;
  double setup_delay = 0.0;

  // Backup machinery, refreshed whenever the carrying lightpath changes.
  CandidateSet candidates;
  std::vector<ProbeWindow> windows;  // one per candidate, current epoch
  std::uint64_t epoch = 0;
  std::vector<RankedPath> backups;   // most recent completed ranking
  std::vector<BlockingEstimate> last_estimates;
  std::vector<std::uint64_t> probes_per_candidate;
  std::uint32_t rankings_completed = 0;

  std::vector<CarriedSegment> carried;  // closed segments
  double segment_start = 0.0;           // of the open segment, when live
  std::optional<double> ended_at;

  bool live() const {
    return state == ConnectionState::kActive || state == ConnectionState::kRestored;
  }

  // Seconds of service delivered up to `now`.
  double carried_until(double now) const;
  double carried_duration() const;
};

}  // namespace rftr
