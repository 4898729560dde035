#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "wsnsim/engine.hpp"
#include "wsnsim/hyb.hpp"

namespace wsnsim {

/// Runs the hybrid protocol on top of the engine: configuration upload and
/// table download at start, per-node state machines, energy reports after
/// each delivery and periodic table refreshes at the base station.
class HybAgent : public Agent {
 public:
  explicit HybAgent(Simulator& sim);

  void start() override;
  void on_sense(NodeId node, EventId event) override;
  void on_receive(NodeId node, const Frame& frame) override;
  void on_tx_result(const Frame& frame, TxResult result) override;
  void on_refresh() override;
  void on_report(NodeId node, std::int64_t residual_pj) override;
  void finish(RunResult& result) override;

  const NeighbourTable& table() const { return table_; }
  const hyb::HybNodeState& node(NodeId id) const { return nodes_.at(id); }
  std::optional<std::int64_t> last_known_residual(NodeId id) const;

 private:
  struct Pending {
    DataPacket packet;
    NodeId holder = 0;
    std::set<NodeId> attempted;
  };

  hyb::HybNodeState& sync(NodeId id);
  hyb::HybContext context() const;
  RegionParams region() const;
  void act(NodeId at, DataPacket packet, const hyb::Action& action, std::set<NodeId> attempted);
  void at_base_station(const Frame& frame);

  std::map<NodeId, hyb::HybNodeState> nodes_;
  NeighbourTable table_;
  std::map<std::uint64_t, Pending> pending_;  // by frame handle
  std::map<NodeId, std::int64_t> bs_known_;
  std::map<std::pair<NodeId, EventId>, std::uint32_t> accepted_;
};

/// Routing-table entry of the AODV-like baseline (only routes to the sink
/// are ever needed).
struct RouteTableEntry {
  NodeId destination = kBaseStation;
  NodeId next_hop = 0;
  std::uint32_t hop_count = 0;
  std::uint64_t freshness = 0;
};

/// Source routes known to one node, each starting at that node and ending at
/// the sink.
class RouteCache {
 public:
  void add(std::vector<NodeId> route);
  /// Shortest cached route, ties broken lexicographically.
  std::optional<std::vector<NodeId>> best() const;
  /// Forgets every route using the directed link a -> b.
  void purge_link(NodeId a, NodeId b);
  std::size_t size() const { return routes_.size(); }
  const std::set<std::vector<NodeId>>& routes() const { return routes_; }

 private:
  std::set<std::vector<NodeId>> routes_;
};

/// Simplified on-demand baselines: broadcast route discovery, a reply from
/// the sink along the reverse path, MAC-level retransmission, and timeouts.
/// In AODV mode nodes keep a next-hop entry; in DSR mode replies carry the
/// full route, data is source-routed, and relays snoop routes into a cache.
class BaselineAgent : public Agent {
 public:
  enum class Mode { Aodv, Dsr };

  BaselineAgent(Simulator& sim, Mode mode);

  void on_sense(NodeId node, EventId event) override;
  void on_receive(NodeId node, const Frame& frame) override;
  void on_tx_result(const Frame& frame, TxResult result) override;
  void on_timer(NodeId node, std::uint64_t token) override;

  /// Hands a freshly generated packet to its origin's routing layer.
  void originate(NodeId node, DataPacket packet);

  Mode mode() const { return mode_; }
  std::optional<RouteTableEntry> route(NodeId node) const;
  const RouteCache* cache(NodeId node) const;

 private:
  struct Discovery {
    std::uint64_t rreq_id = 0;
    std::uint32_t attempts = 0;
    std::vector<DataPacket> buffered;
  };
  struct NodeState {
    std::optional<RouteTableEntry> route;
    RouteCache cache;
    std::set<std::pair<NodeId, std::uint64_t>> seen;
    std::map<std::pair<NodeId, std::uint64_t>, NodeId> reverse;
    std::uint64_t next_rreq = 1;
    std::optional<Discovery> discovery;
  };
  struct Retry {
    Frame frame;
    std::uint32_t attempts = 0;
  };

  NodeState& state(NodeId id) { return nodes_[id]; }
  bool has_route(NodeId node) const;
  void start_discovery(NodeId node);
  void complete_discovery(NodeId node);
  void send_data(NodeId node, DataPacket packet);
  void unicast(Frame frame, std::uint32_t attempts = 0, double delay = 0.0);
  void give_up(const Frame& frame);
  void handle_rreq(NodeId node, const Frame& frame);
  void handle_rrep(NodeId node, const Frame& frame);
  void handle_data(NodeId node, const Frame& frame);

  Mode mode_;
  std::map<NodeId, NodeState> nodes_;
  std::map<std::uint64_t, Retry> retries_;  // by frame handle
};

}  // namespace wsnsim
