#pragma once

// Deterministic discrete-event core.
//
// One Simulator owns one run: placement, the event queue, the shared channel,
// every battery and the event log. Protocol behaviour lives in an Agent that
// reacts to sensing, receptions, transmit outcomes and timers, and talks back
// through the Simulator's service calls. Everything runs on one thread; equal
// scenarios produce byte-identical logs.

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "wsnsim/channel.hpp"
#include "wsnsim/event_log.hpp"
#include "wsnsim/event_queue.hpp"
#include "wsnsim/metrics.hpp"
#include "wsnsim/packet.hpp"
#include "wsnsim/rng.hpp"
#include "wsnsim/scenario.hpp"

namespace wsnsim {

/// Route discovery flood message. `route_record` is only filled in DSR mode.
struct RouteRequest {
  std::uint64_t rreq_id = 0;
  NodeId origin = 0;
  NodeId target = kBaseStation;
  std::uint32_t hop_count = 0;
  std::vector<NodeId> route_record;
};

/// Reply travelling back to the origin. DSR replies carry the whole route
/// (origin first, base station last).
struct RouteReply {
  std::uint64_t rreq_id = 0;
  NodeId origin = 0;
  std::uint32_t hop_count = 0;
  std::vector<NodeId> route;
};

enum class FrameType { Data, Rreq, Rrep };

struct Frame {
  FrameType type = FrameType::Data;
  NodeId tx = 0;
  NodeId rx = kBroadcast;
  std::uint64_t bits = 0;
  std::uint64_t handle = 0;  // set by Simulator::transmit
  double deadline = std::numeric_limits<double>::infinity();
  std::variant<DataPacket, RouteRequest, RouteReply> payload;

  bool unicast() const { return rx != kBroadcast; }
  const DataPacket& data() const { return std::get<DataPacket>(payload); }
  std::optional<EventId> event_id() const;
};

enum class TxResult {
  Granted,    // unicast admitted; Delivered or Lost follows at its end
  Delivered,  // unicast reached its receiver intact
  Busy,       // handshake refused, nothing sent
  Collided,   // went on the air but overlapped another frame at arbitration
  Lost,       // admitted, then destroyed by a later overlapping frame
  Expired,    // deadline passed while deferring to a busy medium
  Asleep,     // transmitter below its energy threshold
};

struct DeliveredPacket {
  DataPacket packet;
  NodeId last_hop = 0;
  double time = 0.0;
};

struct RunResult {
  std::vector<LogRecord> log;
  MetricsReport report;
  std::vector<DeliveredPacket> deliveries;
  std::map<NodeId, EnergyState> energy;
  LocationTable locations;
  std::optional<NeighbourTable> final_table;                              // HYB only
  std::map<NodeId, std::map<NodeId, std::uint64_t>> use_counts;           // HYB only
  std::map<std::pair<NodeId, EventId>, std::uint32_t> accepted;           // HYB only
  std::uint64_t rreq_broadcasts = 0;                                      // baselines only
  std::uint64_t in_flight = 0;
  std::vector<std::string> violations;  // engine-checked invariants that failed
  double wall_seconds = 0.0;
};

class Simulator;

class Agent {
 public:
  explicit Agent(Simulator& sim) : sim_(sim) {}
  virtual ~Agent() = default;
  Agent(const Agent&) = delete;
  Agent& operator=(const Agent&) = delete;

  virtual void start() {}
  virtual void on_sense(NodeId node, EventId event) = 0;
  virtual void on_receive(NodeId node, const Frame& frame) = 0;
  virtual void on_tx_result(const Frame& frame, TxResult result) = 0;
  virtual void on_timer(NodeId /*node*/, std::uint64_t /*token*/) {}
  virtual void on_refresh() {}
  virtual void on_report(NodeId /*node*/, std::int64_t /*residual_pj*/) {}
  virtual void finish(RunResult& /*result*/) {}

 protected:
  Simulator& sim_;
};

std::unique_ptr<Agent> make_agent(Protocol protocol, Simulator& sim);

class Simulator {
 public:
  explicit Simulator(Scenario scenario);
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Validates the scenario, places nodes, builds the channel and runs the
  /// agent's configuration phase. Throws ConfigError.
  void setup();
  void run_until_idle();
  RunResult finish();

  /// setup + run_until_idle + finish.
  RunResult run();

  Agent& agent() { return *agent_; }

  /// Replaces the protocol agent chosen by the scenario. Call before setup.
  using AgentFactory = std::function<std::unique_ptr<Agent>(Simulator&)>;
  void set_agent_factory(AgentFactory factory) { factory_ = std::move(factory); }

  /// Runs `fn` inside the event loop at simulated time `at`.
  void at(double time, std::function<void()> fn);

  // ---- services for agents ----------------------------------------------

  double now() const { return queue_.now(); }
  const Scenario& scenario() const { return scenario_; }
  const LocationTable& locations() const { return locations_; }
  const Channel& channel() const { return *channel_; }
  Location position(NodeId id) const;
  bool alive(NodeId id) const;
  EnergyState& energy(NodeId id);
  const EnergyState& energy(NodeId id) const;
  /// Forces a battery down to `to_joules`, booking the loss in the ledger.
  void drain(NodeId id, double to_joules);
  Rng& jitter() { return jitter_rng_; }
  std::uint64_t new_packet_uid() { return next_uid_++; }

  /// Queues a transmission attempt `delay` seconds from now. Returns the
  /// frame handle reported back in on_tx_result.
  std::uint64_t transmit(Frame frame, double delay = 0.0);
  void set_timer(double delay, NodeId node, std::uint64_t token);

  void log_generated(const DataPacket& packet);
  void deliver(const DataPacket& packet, NodeId last_hop);
  void drop(const DataPacket& packet, NodeId at, DropReason reason);

  /// Control frame outside the contended channel (configuration uploads and
  /// downloads, energy reports). Logged and charged; returns false without
  /// sending when the transmitter is asleep.
  bool out_of_band(LogKind kind, NodeId tx, NodeId rx);

  /// The base station learns `residual_pj` one control airtime from now.
  void schedule_report(NodeId node, std::int64_t residual_pj);

  void schedule_refreshes(double period);
  void log_refresh(std::size_t dead);
  void add_violation(std::string what);

 private:
  struct PendingTx {
    Frame frame;
  };
  struct OnAir {
    Frame frame;
    bool collided_at_start = false;
  };

  void dispatch(const Event& e);
  void handle_sense(const Event& e);
  void handle_frame_start(double time);
  void handle_frame_end(std::uint64_t transmission);
  void enqueue_attempt(Frame frame, double at);
  void charge(NodeId id, double joules);
  void log(LogKind kind, std::optional<NodeId> tx, std::optional<NodeId> rx, std::optional<EventId> event,
           std::string outcome);
  void close_packet(const DataPacket& packet);
  double exchange_airtime(const Frame& f) const;

  Scenario scenario_;
  bool set_up_ = false;
  EventQueue queue_;
  LocationTable locations_;
  std::unique_ptr<Channel> channel_;
  std::unique_ptr<Agent> agent_;
  AgentFactory factory_;
  std::map<NodeId, EnergyState> energy_;
  std::map<NodeId, std::int64_t> charged_pj_;
  std::vector<EnvEvent> env_events_;
  Rng placement_rng_;
  Rng traffic_rng_;
  Rng jitter_rng_;

  std::map<double, std::vector<PendingTx>> pending_;
  std::map<std::uint64_t, OnAir> on_air_;
  std::map<std::uint64_t, std::function<void()>> callbacks_;
  std::uint64_t next_callback_ = 1;
  std::uint64_t next_handle_ = 1;
  std::uint64_t next_uid_ = 1;
  std::uint64_t batch_ = 0;

  std::vector<LogRecord> log_;
  std::vector<DeliveredPacket> deliveries_;
  std::set<std::uint64_t> outstanding_;
  std::set<std::uint64_t> closed_;
  std::vector<std::string> violations_;
};

}  // namespace wsnsim
