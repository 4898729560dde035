#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

#include "wsnsim/types.hpp"

namespace wsnsim {

enum class EventKind { Sense, FrameStart, FrameEnd, Timeout, BsRefresh, Report };

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::Sense;
  NodeId node = 0;
  std::uint64_t ref = 0;  // kind-specific: event index, transmission id, timer token, ...
};

/// Pops in (time, seq) order. Scheduling before the last popped time throws
/// std::logic_error, so handlers cannot break causality.
class EventQueue {
 public:
  std::uint64_t push(double time, EventKind kind, NodeId node = 0, std::uint64_t ref = 0) {
    if (time < now_) throw std::logic_error("event scheduled in the past");
    const std::uint64_t seq = next_seq_++;
    heap_.push(Event{time, seq, kind, node, ref});
    return seq;
  }

  Event pop() {
    Event e = heap_.top();
    heap_.pop();
    now_ = e.time;
    return e;
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  double now() const { return now_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
  double now_ = 0.0;
};

}  // namespace wsnsim
