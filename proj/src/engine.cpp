#include "wsnsim/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace wsnsim {

namespace {

// Upper bound of the random pause a deferring transmitter adds after the
// medium clears, so that several deferrers do not restart in lockstep.
constexpr double kDeferJitter = 0.5e-3;

}  // namespace

std::optional<EventId> Frame::event_id() const {
  if (const auto* d = std::get_if<DataPacket>(&payload)) return d->event_id;
  return std::nullopt;
}

Simulator::Simulator(Scenario scenario)
    : scenario_(std::move(scenario)),
      placement_rng_(scenario_.seed, "placement"),
      traffic_rng_(scenario_.seed, "traffic"),
      jitter_rng_(scenario_.seed, "jitter") {}

Simulator::~Simulator() = default;

void Simulator::setup() {
  if (set_up_) return;
  scenario_.validate();
  locations_ = place_nodes(scenario_, placement_rng_);
  if (locations_.empty()) throw ConfigError("topology has no nodes");
  for (const auto& [id, loc] : locations_.entries()) {
    if (loc.x < 0 || loc.y < 0 || loc.x > scenario_.topology_width || loc.y > scenario_.topology_height) {
      throw ConfigError("node " + std::to_string(id) + " lies outside the topology");
    }
    energy_.emplace(id, EnergyState(scenario_.energy.initial, scenario_.energy.threshold));
    charged_pj_[id] = 0;
  }

  std::map<NodeId, Location> positions = locations_.entries();
  positions[kBaseStation] = scenario_.bs_location;
  channel_ = std::make_unique<Channel>(std::move(positions), scenario_.radio.radio_range);

  env_events_ = generate_events(scenario_, traffic_rng_);
  for (std::size_t i = 0; i < env_events_.size(); ++i) {
    queue_.push(env_events_[i].time, EventKind::Sense, 0, i);
  }

  agent_ = factory_ ? factory_(*this) : make_agent(scenario_.protocol, *this);
  set_up_ = true;
  agent_->start();
}

void Simulator::run_until_idle() {
  if (!set_up_) setup();
  while (!queue_.empty()) dispatch(queue_.pop());
}

RunResult Simulator::run() {
  const auto wall_start = std::chrono::steady_clock::now();
  setup();
  run_until_idle();
  RunResult r = finish();
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return r;
}

void Simulator::at(double time, std::function<void()> fn) {
  const std::uint64_t id = next_callback_++;
  callbacks_.emplace(id, std::move(fn));
  queue_.push(time, EventKind::Timeout, kBroadcast, id);
}

Location Simulator::position(NodeId id) const {
  return id == kBaseStation ? scenario_.bs_location : locations_.at(id);
}

bool Simulator::alive(NodeId id) const {
  if (id == kBaseStation) return true;
  auto it = energy_.find(id);
  return it != energy_.end() && it->second.alive();
}

EnergyState& Simulator::energy(NodeId id) {
  auto it = energy_.find(id);
  if (it == energy_.end()) throw std::out_of_range("no battery for node " + std::to_string(id));
  return it->second;
}

const EnergyState& Simulator::energy(NodeId id) const {
  auto it = energy_.find(id);
  if (it == energy_.end()) throw std::out_of_range("no battery for node " + std::to_string(id));
  return it->second;
}

void Simulator::charge(NodeId id, double joules) {
  if (id == kBaseStation) return;
  charged_pj_[id] += energy(id).take(joules);
}

void Simulator::drain(NodeId id, double to_joules) {
  EnergyState& battery = energy(id);
  const std::int64_t before = battery.consumed_pj();
  battery.drain_to(to_joules);
  charged_pj_[id] += battery.consumed_pj() - before;
}

void Simulator::log(LogKind kind, std::optional<NodeId> tx, std::optional<NodeId> rx,
                    std::optional<EventId> event, std::string outcome) {
  if (is_frame(kind) && tx && !alive(*tx)) add_violation("frame from asleep node " + std::to_string(*tx));
  log_.push_back(LogRecord{now(), kind, tx, rx, event, std::move(outcome)});
}

std::uint64_t Simulator::transmit(Frame frame, double delay) {
  frame.handle = next_handle_++;
  const std::uint64_t handle = frame.handle;
  enqueue_attempt(std::move(frame), now() + delay);
  return handle;
}

void Simulator::enqueue_attempt(Frame frame, double at) {
  auto [it, fresh] = pending_.try_emplace(at);
  if (fresh) queue_.push(at, EventKind::FrameStart);
  it->second.push_back(PendingTx{std::move(frame)});
}

void Simulator::set_timer(double delay, NodeId node, std::uint64_t token) {
  queue_.push(now() + delay, EventKind::Timeout, node, token);
}

void Simulator::log_generated(const DataPacket& packet) {
  if (!outstanding_.insert(packet.uid).second) add_violation("packet uid generated twice");
  log(LogKind::Sense, packet.origin, std::nullopt, packet.event_id, "GEN");
}

void Simulator::close_packet(const DataPacket& packet) {
  if (outstanding_.erase(packet.uid) == 0) {
    add_violation("packet " + std::to_string(packet.uid) + " closed without being open");
  }
  if (!closed_.insert(packet.uid).second) {
    add_violation("packet " + std::to_string(packet.uid) + " closed twice");
  }
}

void Simulator::deliver(const DataPacket& packet, NodeId last_hop) {
  close_packet(packet);
  if (packet.hops + 1 != packet.visited.size()) add_violation("hop count disagrees with visited list");
  log(LogKind::Deliver, last_hop, kBaseStation, packet.event_id, "HOPS=" + std::to_string(packet.hops));
  deliveries_.push_back({packet, last_hop, now()});
}

void Simulator::drop(const DataPacket& packet, NodeId at, DropReason reason) {
  close_packet(packet);
  log(LogKind::Drop, at, std::nullopt, packet.event_id, std::string(to_string(reason)));
}

bool Simulator::out_of_band(LogKind kind, NodeId tx, NodeId rx) {
  if (!alive(tx)) return false;
  const auto bits = scenario_.control_frame_bits;
  const double d = distance(position(tx), position(rx));
  log(kind, tx, rx, std::nullopt, "TX");
  charge(tx, tx_energy(scenario_.energy.coefficients, bits, d));
  charge(rx, rx_energy(scenario_.energy.coefficients, bits));
  return true;
}

void Simulator::schedule_report(NodeId node, std::int64_t residual_pj) {
  const double delay = frame_airtime(scenario_.radio, scenario_.control_frame_bits);
  queue_.push(now() + delay, EventKind::Report, node, static_cast<std::uint64_t>(residual_pj));
}

void Simulator::schedule_refreshes(double period) {
  for (int k = 1; k * period <= scenario_.sim_time + 1e-9; ++k) {
    queue_.push(k * period, EventKind::BsRefresh);
  }
}

void Simulator::log_refresh(std::size_t dead) {
  log(LogKind::Refresh, kBaseStation, std::nullopt, std::nullopt, "DEAD=" + std::to_string(dead));
}

void Simulator::add_violation(std::string what) { violations_.push_back(std::move(what)); }

void Simulator::dispatch(const Event& e) {
  switch (e.kind) {
    case EventKind::Sense:
      handle_sense(e);
      break;
    case EventKind::FrameStart:
      handle_frame_start(e.time);
      break;
    case EventKind::FrameEnd:
      handle_frame_end(e.ref);
      break;
    case EventKind::Timeout:
      if (e.node == kBroadcast) {
        auto it = callbacks_.find(e.ref);
        auto fn = std::move(it->second);
        callbacks_.erase(it);
        fn();
      } else {
        agent_->on_timer(e.node, e.ref);
      }
      break;
    case EventKind::BsRefresh:
      agent_->on_refresh();
      break;
    case EventKind::Report:
      agent_->on_report(e.node, static_cast<std::int64_t>(e.ref));
      break;
  }
}

void Simulator::handle_sense(const Event& e) {
  const EnvEvent& env = env_events_.at(e.ref);
  std::vector<NodeId> alive_ids;
  for (const auto& [id, battery] : energy_) {
    if (battery.alive()) alive_ids.push_back(id);
  }
  for (NodeId n : sensing_nodes(env.where, scenario_.sensing_radius, locations_, alive_ids)) {
    agent_->on_sense(n, env.id);
  }
}

double Simulator::exchange_airtime(const Frame& f) const {
  const double frame = frame_airtime(scenario_.radio, f.bits);
  if (!f.unicast()) return frame;
  return frame + 2.0 * frame_airtime(scenario_.radio, scenario_.control_frame_bits);
}

void Simulator::handle_frame_start(double time) {
  auto node = pending_.extract(time);
  if (node.empty()) return;
  std::vector<PendingTx> batch = std::move(node.mapped());
  const std::uint64_t batch_id = ++batch_;

  // Within one instant the strongest link to each receiver is served first.
  std::stable_sort(batch.begin(), batch.end(), [&](const PendingTx& a, const PendingTx& b) {
    if (a.frame.rx != b.frame.rx) return a.frame.rx < b.frame.rx;
    if (a.frame.unicast()) {
      const double da = distance_sq(position(a.frame.tx), position(a.frame.rx));
      const double db = distance_sq(position(b.frame.tx), position(b.frame.rx));
      if (da != db) return da < db;
    }
    if (a.frame.tx != b.frame.tx) return a.frame.tx < b.frame.tx;
    return a.frame.handle < b.frame.handle;
  });

  const auto listening = [this](NodeId n) { return alive(n); };
  const auto& coeff = scenario_.energy.coefficients;
  const auto ctrl = scenario_.control_frame_bits;

  for (auto& pending : batch) {
    Frame& f = pending.frame;
    if (!alive(f.tx)) {
      agent_->on_tx_result(f, TxResult::Asleep);
      continue;
    }
    if (now() >= f.deadline) {
      agent_->on_tx_result(f, TxResult::Expired);
      continue;
    }
    if (auto until = channel_->busy_until(f.tx, batch_id)) {
      const double retry = *until + jitter_rng_.uniform(0.0, kDeferJitter);
      if (retry >= f.deadline) {
        agent_->on_tx_result(f, TxResult::Expired);
      } else {
        enqueue_attempt(std::move(f), retry);
      }
      continue;
    }

    const double airtime = exchange_airtime(f);
    const ArbitrationResult res = channel_->arbitrate(f.tx, f.rx, now(), now() + airtime, batch_id, listening);
    if (res.outcome == Arbitration::Busy) {
      agent_->on_tx_result(f, TxResult::Busy);
      continue;
    }

    const ActiveTransmission* t = channel_->find(res.transmission);
    static constexpr LogKind kKinds[] = {LogKind::Data, LogKind::Rreq, LogKind::Rrep};
    log(kKinds[static_cast<int>(f.type)], f.tx, f.rx, f.event_id(), "TX");
    for (std::uint64_t victim : res.victims) {
      const auto* v = channel_->find(victim);
      const auto vit = on_air_.find(victim);
      log(LogKind::Collision, f.tx, v ? std::optional<NodeId>(v->tx) : std::nullopt,
          vit != on_air_.end() ? vit->second.frame.event_id() : std::nullopt, "LOST");
    }

    if (f.unicast()) {
      const double d = distance(position(f.tx), position(f.rx));
      charge(f.tx, tx_energy(coeff, ctrl, d) + tx_energy(coeff, f.bits, d) + rx_energy(coeff, ctrl));
      charge(f.rx, rx_energy(coeff, ctrl) + tx_energy(coeff, ctrl, d) + rx_energy(coeff, f.bits));
      if (channel_->reservations(f.rx) > 1) add_violation("receiver reserved by two grants");
    } else {
      charge(f.tx, tx_energy(coeff, f.bits, scenario_.radio.radio_range));
      for (NodeId r : t->receivers) charge(r, rx_energy(coeff, f.bits));
    }

    const bool collided = res.outcome == Arbitration::Collision;
    queue_.push(t->end, EventKind::FrameEnd, f.tx, res.transmission);
    const Frame copy = f;
    on_air_.emplace(res.transmission, OnAir{std::move(f), collided});
    if (copy.unicast()) agent_->on_tx_result(copy, collided ? TxResult::Collided : TxResult::Granted);
  }
}

void Simulator::handle_frame_end(std::uint64_t transmission) {
  const ActiveTransmission t = channel_->release(transmission);
  auto node = on_air_.extract(transmission);
  const OnAir air = std::move(node.mapped());
  const Frame& f = air.frame;

  if (t.unicast()) {
    if (!t.lost) {
      agent_->on_receive(f.rx, f);
      agent_->on_tx_result(f, TxResult::Delivered);
    } else if (!air.collided_at_start) {
      agent_->on_tx_result(f, TxResult::Lost);
    }
    return;
  }
  for (NodeId r : t.receivers) {
    if (t.corrupted.count(r) || !alive(r)) continue;
    agent_->on_receive(r, f);
  }
}

RunResult Simulator::finish() {
  RunResult r;
  for (const auto& [id, battery] : energy_) {
    if (battery.initial_pj() - battery.residual_pj() != battery.consumed_pj() ||
        battery.consumed_pj() != charged_pj_[id]) {
      add_violation("energy ledger of node " + std::to_string(id) + " does not balance");
    }
    log(LogKind::Energy, id, std::nullopt, std::nullopt,
        format_pj(battery.residual_pj()) + ":" + format_pj(battery.consumed_pj()));
  }
  if (agent_) agent_->finish(r);
  r.in_flight = outstanding_.size();
  r.rreq_broadcasts = static_cast<std::uint64_t>(
      std::count_if(log_.begin(), log_.end(), [](const LogRecord& rec) { return rec.kind == LogKind::Rreq; }));
  r.report = collect(log_);
  if (r.report.generated != r.report.delivered + r.report.dropped_total() + r.in_flight) {
    add_violation("packet conservation failed");
  }
  r.log = std::move(log_);
  r.deliveries = std::move(deliveries_);
  r.energy = energy_;
  r.locations = locations_;
  r.violations = std::move(violations_);
  return r;
}

}  // namespace wsnsim
