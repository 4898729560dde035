#pragma once

// Per-node state machine of the hybrid single-hop/multi-hop protocol.
//
// A node holding a packet first tries to reach the base station directly; if
// that link is out of range or would leave the node below its energy floor it
// forwards to the least-used live neighbour from its base-station-issued row.
// Duplicate event ids are suppressed at every node, and a packet that cannot
// be placed within the wait window is discarded rather than retransmitted.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "wsnsim/packet.hpp"
#include "wsnsim/radio.hpp"
#include "wsnsim/topology.hpp"

namespace wsnsim::hyb {

/// Event ids seen recently. Entries whose expiry is before `now` count as
/// absent.
class DedupBuffer {
 public:
  explicit DedupBuffer(double ttl = 5.0) : ttl_(ttl) {}

  bool contains(EventId id, double now) const;
  void record(EventId id, double now);
  double ttl() const { return ttl_; }
  std::size_t size() const { return expiry_.size(); }

 private:
  double ttl_;
  std::map<EventId, double> expiry_;
};

struct HybNodeState {
  NodeId id = 0;
  Location location;
  EnergyState energy;
  NeighbourRow row;
  std::map<NodeId, std::uint64_t> use_count;
  DedupBuffer dedup;

  bool asleep() const { return energy.asleep(); }
};

/// Everything a node consults besides its own state.
struct HybContext {
  Location bs;
  const LocationTable* locations = nullptr;
  RadioParams radio;
  EnergyCoefficients energy;
  double wait_t = 0.1;
  std::function<bool(NodeId)> alive;  // liveness oracle for neighbours
};

struct Action {
  enum class Kind { SendDirect, Forward, Drop };

  Kind kind = Kind::Drop;
  NodeId next = kBaseStation;
  DropReason reason = DropReason::NoRoute;

  static Action send_direct() { return {Kind::SendDirect, kBaseStation, {}}; }
  static Action forward(NodeId to) { return {Kind::Forward, to, {}}; }
  static Action drop(DropReason why) { return {Kind::Drop, kBaseStation, why}; }

  friend bool operator==(const Action&, const Action&) = default;
};

struct EnergyReport {
  NodeId node = 0;
  double residual = 0.0;
  std::int64_t residual_pj = 0;
};

/// Direct link to the base station is in range and the node can pay for the
/// payload without dropping under its threshold.
bool single_hop_feasible(const HybNodeState& state, const HybContext& ctx, std::uint64_t payload_bits);

/// Least-use-count neighbour among those not yet visited, alive, in range and
/// not in `exclude`. Ties go to the earlier row position.
std::optional<NodeId> best_neighbour(const HybNodeState& state, const DataPacket& packet,
                                     const HybContext& ctx, const std::set<NodeId>& exclude = {});

Action on_sense(HybNodeState& state, EventId event, double now, const HybContext& ctx,
                std::uint64_t payload_bits = 4096);

/// Appends this node to `packet.visited` when the packet is accepted.
Action on_receive(HybNodeState& state, DataPacket& packet, double now, const HybContext& ctx);

/// After a failed handshake. `attempted` holds every receiver already tried
/// for this packet at this node (kBaseStation for the direct attempt).
Action on_busy_channel(const HybNodeState& state, const DataPacket& packet,
                       const std::set<NodeId>& attempted, double now, const HybContext& ctx);

/// Called once the data frame to `neighbour` is actually on the air.
void note_forward(HybNodeState& state, NodeId neighbour);

/// Installs a refreshed row, dropping use counts of neighbours that left it.
void apply_row(HybNodeState& state, NeighbourRow row);

EnergyReport report_residual(const HybNodeState& state);

}  // namespace wsnsim::hyb
