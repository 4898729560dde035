#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "wsnsim/event_log.hpp"
#include "wsnsim/packet.hpp"

namespace wsnsim {

/// The four comparison metrics plus delivery and energy accounting of one run.
struct MetricsReport {
  double execution_time = 0.0;  // simulated time of the last delivery or drop
  double avg_hop_count = 0.0;   // over delivered packets; direct delivery is 0
  std::uint64_t collisions = 0;
  std::uint64_t signals = 0;  // every transmitted frame of any type
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::array<std::uint64_t, 4> dropped{};  // indexed by DropReason
  std::uint64_t unique_events_delivered = 0;
  std::map<NodeId, double> residual_energy;
  double energy_consumed = 0.0;  // sum over nodes, J

  std::uint64_t dropped_for(DropReason r) const { return dropped[static_cast<std::size_t>(r)]; }
  std::uint64_t dropped_total() const;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

MetricsReport collect(const std::vector<LogRecord>& log);

/// Parses then collects; malformed lines throw ParseError with the line number.
MetricsReport collect(std::string_view log_text);

}  // namespace wsnsim
