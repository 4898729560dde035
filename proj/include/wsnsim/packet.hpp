#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wsnsim/types.hpp"

namespace wsnsim {

enum class DropReason { Asleep, Duplicate, NoRoute, Congestion };

std::string_view to_string(DropReason reason);

/// A sensed reading travelling towards the sink.
///
/// `visited` starts with the origin and gains every relay that accepts the
/// packet, so `hops` (intermediate relays) is always `visited.size() - 1`
/// and a direct delivery has zero hops.
struct DataPacket {
  std::uint64_t uid = 0;
  EventId event_id = 0;
  NodeId origin = 0;
  std::uint64_t payload_bits = 4096;
  std::vector<NodeId> visited;
  std::uint32_t hops = 0;
  double created_at = 0.0;
  std::vector<NodeId> source_route;  // DSR only; ends at kBaseStation

  static DataPacket make(std::uint64_t uid, EventId event, NodeId origin, std::uint64_t bits, double now) {
    DataPacket p;
    p.uid = uid;
    p.event_id = event;
    p.origin = origin;
    p.payload_bits = bits;
    p.visited = {origin};
    p.created_at = now;
    return p;
  }

  bool has_visited(NodeId id) const;
  void append_hop(NodeId relay);
};

}  // namespace wsnsim
