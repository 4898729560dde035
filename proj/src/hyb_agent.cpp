#include <algorithm>

#include "wsnsim/agents.hpp"

namespace wsnsim {

std::unique_ptr<Agent> make_agent(Protocol protocol, Simulator& sim) {
  switch (protocol) {
    case Protocol::Hyb:
      return std::make_unique<HybAgent>(sim);
    case Protocol::Aodv:
      return std::make_unique<BaselineAgent>(sim, BaselineAgent::Mode::Aodv);
    case Protocol::Dsr:
      return std::make_unique<BaselineAgent>(sim, BaselineAgent::Mode::Dsr);
  }
  throw ConfigError("unknown protocol");
}

HybAgent::HybAgent(Simulator& sim) : Agent(sim) {}

RegionParams HybAgent::region() const {
  RegionParams r = sim_.scenario().region;
  r.radio_range = sim_.scenario().radio.radio_range;
  return r;
}

hyb::HybContext HybAgent::context() const {
  const Scenario& s = sim_.scenario();
  hyb::HybContext ctx;
  ctx.bs = s.bs_location;
  ctx.locations = &sim_.locations();
  ctx.radio = s.radio;
  ctx.energy = s.energy.coefficients;
  ctx.wait_t = s.hyb.wait_t;
  if (s.hyb.liveness == Liveness::GroundTruth) {
    ctx.alive = [this](NodeId v) { return sim_.alive(v); };
  } else {
    const std::int64_t floor = joules_to_pj(s.energy.threshold);
    ctx.alive = [this, floor](NodeId v) {
      auto it = bs_known_.find(v);
      return it != bs_known_.end() && it->second >= floor;
    };
  }
  return ctx;
}

hyb::HybNodeState& HybAgent::sync(NodeId id) {
  auto& s = nodes_.at(id);
  s.energy = sim_.energy(id);
  return s;
}

std::optional<std::int64_t> HybAgent::last_known_residual(NodeId id) const {
  auto it = bs_known_.find(id);
  if (it == bs_known_.end()) return std::nullopt;
  return it->second;
}

void HybAgent::start() {
  const auto& locs = sim_.locations();
  std::set<NodeId> uploaded;
  for (const auto& [id, loc] : locs.entries()) {
    if (sim_.out_of_band(LogKind::Loc, id, kBaseStation)) uploaded.insert(id);
  }
  for (NodeId id : uploaded) bs_known_[id] = sim_.energy(id).residual_pj();

  std::set<NodeId> alive;
  for (NodeId id : uploaded) {
    if (sim_.alive(id)) alive.insert(id);
  }
  table_ = compute_neighbour_table(locs, region(), alive);

  for (const auto& [id, loc] : locs.entries()) {
    hyb::HybNodeState s;
    s.id = id;
    s.location = loc;
    s.energy = sim_.energy(id);
    s.dedup = hyb::DedupBuffer(sim_.scenario().hyb.dedup_ttl);
    if (const NeighbourRow* row = table_.find(id)) {
      s.row = *row;
      sim_.out_of_band(LogKind::Table, kBaseStation, id);
    } else {
      s.row = NeighbourRow::isolated();
    }
    nodes_.emplace(id, std::move(s));
  }
  sim_.schedule_refreshes(sim_.scenario().hyb.refresh_period);
}

void HybAgent::on_sense(NodeId node, EventId event) {
  const Scenario& s = sim_.scenario();
  DataPacket packet = DataPacket::make(sim_.new_packet_uid(), event, node, s.payload_bits(), sim_.now());
  sim_.log_generated(packet);
  auto& state = sync(node);
  const hyb::Action action = hyb::on_sense(state, event, sim_.now(), context(), s.payload_bits());
  if (action.kind != hyb::Action::Kind::Drop) ++accepted_[{node, event}];
  act(node, std::move(packet), action, {});
}

void HybAgent::act(NodeId at, DataPacket packet, const hyb::Action& action, std::set<NodeId> attempted) {
  if (action.kind == hyb::Action::Kind::Drop) {
    sim_.drop(packet, at, action.reason);
    return;
  }
  const NodeId to = action.kind == hyb::Action::Kind::SendDirect ? kBaseStation : action.next;
  attempted.insert(to);
  Frame f;
  f.type = FrameType::Data;
  f.tx = at;
  f.rx = to;
  f.bits = packet.payload_bits;
  f.deadline = packet.created_at + sim_.scenario().hyb.wait_t;
  f.payload = packet;
  const std::uint64_t handle = sim_.transmit(std::move(f));
  pending_.emplace(handle, Pending{std::move(packet), at, std::move(attempted)});
}

void HybAgent::on_tx_result(const Frame& frame, TxResult result) {
  auto it = pending_.find(frame.handle);
  if (it == pending_.end()) return;

  switch (result) {
    case TxResult::Granted:
      hyb::note_forward(nodes_.at(it->second.holder), frame.rx);
      return;
    case TxResult::Delivered:
      pending_.erase(it);
      return;
    case TxResult::Collided:
      hyb::note_forward(nodes_.at(it->second.holder), frame.rx);
      [[fallthrough]];
    case TxResult::Busy: {
      Pending p = std::move(it->second);
      pending_.erase(it);
      auto& state = sync(p.holder);
      const hyb::Action next = hyb::on_busy_channel(state, p.packet, p.attempted, sim_.now(), context());
      act(p.holder, std::move(p.packet), next, std::move(p.attempted));
      return;
    }
    case TxResult::Lost:
    case TxResult::Expired:
      sim_.drop(it->second.packet, it->second.holder, DropReason::Congestion);
      pending_.erase(it);
      return;
    case TxResult::Asleep:
      sim_.drop(it->second.packet, it->second.holder, DropReason::Asleep);
      pending_.erase(it);
      return;
  }
}

void HybAgent::on_receive(NodeId node, const Frame& frame) {
  if (frame.type != FrameType::Data) return;
  if (node == kBaseStation) {
    at_base_station(frame);
    return;
  }
  DataPacket packet = frame.data();
  auto& state = sync(node);
  const hyb::Action action = hyb::on_receive(state, packet, sim_.now(), context());
  if (action.kind != hyb::Action::Kind::Drop || action.reason == DropReason::NoRoute) {
    ++accepted_[{node, packet.event_id}];
  }
  act(node, std::move(packet), action, {});
}

void HybAgent::at_base_station(const Frame& frame) {
  const DataPacket& packet = frame.data();
  sim_.deliver(packet, frame.tx);

  const Location bs = sim_.scenario().bs_location;
  for (std::size_t i = 1; i < packet.visited.size(); ++i) {
    const double before = distance_sq(sim_.position(packet.visited[i - 1]), bs);
    const double after = distance_sq(sim_.position(packet.visited[i]), bs);
    if (!(after < before)) {
      sim_.add_violation("packet " + std::to_string(packet.uid) + " moved away from the base station");
    }
  }

  // The last hop's residual rides on the data frame; the rest report.
  bs_known_[frame.tx] = sim_.energy(frame.tx).residual_pj();
  for (NodeId v : packet.visited) {
    if (v == frame.tx) continue;
    if (sim_.out_of_band(LogKind::Report, v, kBaseStation)) {
      sim_.schedule_report(v, hyb::report_residual(sync(v)).residual_pj);
    }
  }
}

void HybAgent::on_report(NodeId node, std::int64_t residual_pj) { bs_known_[node] = residual_pj; }

void HybAgent::on_refresh() {
  const std::int64_t floor = joules_to_pj(sim_.scenario().energy.threshold);
  std::set<NodeId> dead;
  for (const auto& [id, loc] : sim_.locations().entries()) {
    const bool gone = sim_.scenario().hyb.liveness == Liveness::GroundTruth
                          ? !sim_.alive(id)
                          : (bs_known_.count(id) == 0 || bs_known_.at(id) < floor);
    if (gone) dead.insert(id);
  }
  NeighbourTable fresh = refresh_table(table_, sim_.locations(), region(), dead);
  sim_.log_refresh(dead.size());
  for (auto& [id, state] : nodes_) {
    const NeighbourRow* row = fresh.find(id);
    if (!row) continue;
    const NeighbourRow* old = table_.find(id);
    if (old && *old == *row) continue;
    if (sim_.alive(id) && sim_.out_of_band(LogKind::Table, kBaseStation, id)) hyb::apply_row(state, *row);
  }
  table_ = std::move(fresh);
}

void HybAgent::finish(RunResult& result) {
  result.final_table = table_;
  for (const auto& [id, state] : nodes_) result.use_counts[id] = state.use_count;
  result.accepted = accepted_;
}

}  // namespace wsnsim
