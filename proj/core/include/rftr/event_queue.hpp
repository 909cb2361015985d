#pragma once

#include <cstdint>
#include <queue>
#include <variant>
#include <vector>

#include "rftr/ids.hpp"
#include "rftr/probing.hpp"

namespace rftr {

namespace event {

struct Arrival {
  std::size_t request;  // index into the run's arrival list
};
struct Departure {
  ConnectionId connection;
};
struct ProbeSend {
  ConnectionId connection;
  std::size_t path_index;
  std::uint64_t epoch;
  std::uint64_t seq;
};
struct FeedbackArrive {
  ConnectionId connection;
  std::size_t path_index;
  std::uint64_t epoch;
  std::uint64_t seq;
  ProbeOutcome outcome;
};
struct WindowClose {
  ConnectionId connection;
  std::uint64_t epoch;
};
struct LinkFailure {
  LinkId link;
};
struct LinkRepair {
  LinkId link;
};
struct SampleTick {};

}  // namespace event

using EventKind = std::variant<event::Arrival, event::Departure, event::ProbeSend,
                               event::FeedbackArrive, event::WindowClose,
                               event::LinkFailure, event::LinkRepair, event::SampleTick>;

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind;
};

// Min-queue on (time, seq). seq is the insertion counter, so events at equal
// times leave in the order they were scheduled.
class EventQueue {
 public:
  void push(double time, EventKind kind) {
    heap_.push(Event{time, next_seq_++, std::move(kind)});
  }

  Event pop() {
    Event e = heap_.top();
    heap_.pop();
    return e;
  }

  const Event& top() const { return heap_.top(); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Later {
    bool operator()(const Event& x, const Event& y) const {
      if (x.time != y.time) return x.time > y.time;
      return x.seq > y.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace rftr
