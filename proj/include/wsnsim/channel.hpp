#pragma once

// Shared-medium model standing in for 802.11 DCF.
//
// A unicast exchange (RTS, CTS and the frame) is arbitrated in one instant
// and then reserves its receiver for the whole exchange airtime. A node hears
// a transmission when it is within radio range of the transmitter (or is one
// of its endpoints). There is no virtual carrier sense, so a transmitter that
// cannot hear an ongoing exchange can still corrupt it at a receiver both of
// them reach: the hidden-terminal case.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "wsnsim/types.hpp"

namespace wsnsim {

enum class Arbitration { Grant, Busy, Collision };

struct ActiveTransmission {
  std::uint64_t id = 0;
  NodeId tx = 0;
  NodeId rx = kBroadcast;  // kBroadcast for broadcasts
  double start = 0.0;
  double end = 0.0;
  std::uint64_t batch = 0;  // arbitration instant the frame was admitted in
  std::vector<NodeId> receivers;
  std::set<NodeId> corrupted;  // receivers at which the frame overlapped another
  bool lost = false;          // unicast only: the exchange failed

  bool unicast() const { return rx != kBroadcast; }
};

struct ArbitrationResult {
  Arbitration outcome = Arbitration::Busy;
  std::uint64_t transmission = 0;     // valid unless Busy
  std::vector<std::uint64_t> victims;  // earlier transmissions this one overlapped
};

class Channel {
 public:
  /// `positions` must include every endpoint, base station included.
  Channel(std::map<NodeId, Location> positions, double radio_range);

  bool in_range(NodeId a, NodeId b) const;
  const std::vector<NodeId>& neighbours(NodeId n) const;

  /// True when `node` is an endpoint of, or within range of the transmitter
  /// of, any active transmission admitted before `batch`.
  bool senses_activity(NodeId node, std::uint64_t batch) const;

  /// Latest end time among the transmissions `senses_activity` reports.
  std::optional<double> busy_until(NodeId node, std::uint64_t batch) const;

  /// Admits (or refuses) one transmission starting at `start`.
  ///
  /// Unicast: BUSY when the receiver is not listening, out of range, or hears
  /// any active transmission, or when either endpoint is already an endpoint
  /// of one. Otherwise the frame goes on the air; if it reaches a receiver of
  /// an active transmission (or vice versa) both frames are lost there and
  /// the result is COLLISION, else GRANT. Broadcasts are never BUSY unless the
  /// transmitter is itself busy; their receptions fail individually.
  ArbitrationResult arbitrate(NodeId tx, NodeId rx, double start, double end, std::uint64_t batch,
                              const std::function<bool(NodeId)>& listening);

  const ActiveTransmission* find(std::uint64_t id) const;

  /// Removes a transmission at its end event.
  ActiveTransmission release(std::uint64_t id);

  std::size_t active_count() const { return active_.size(); }

  /// Number of unicast reservations currently held on `node`.
  std::size_t reservations(NodeId node) const;

 private:
  bool hears(NodeId node, const ActiveTransmission& t) const;

  std::map<NodeId, Location> positions_;
  double range_sq_;
  std::map<NodeId, std::vector<NodeId>> neighbours_;
  std::map<std::uint64_t, ActiveTransmission> active_;
  std::uint64_t next_id_ = 1;
};

}  // namespace wsnsim
