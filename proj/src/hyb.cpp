#include "wsnsim/hyb.hpp"

#include <algorithm>

namespace wsnsim {

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::Asleep:
      return "ASLEEP";
    case DropReason::Duplicate:
      return "DUPLICATE";
    case DropReason::NoRoute:
      return "NO_ROUTE";
    case DropReason::Congestion:
      return "CONGESTION";
  }
  return "?";
}

bool DataPacket::has_visited(NodeId id) const {
  return std::find(visited.begin(), visited.end(), id) != visited.end();
}

void DataPacket::append_hop(NodeId relay) {
  visited.push_back(relay);
  hops = static_cast<std::uint32_t>(visited.size() - 1);
}

}  // namespace wsnsim

namespace wsnsim::hyb {

bool DedupBuffer::contains(EventId id, double now) const {
  auto it = expiry_.find(id);
  return it != expiry_.end() && !(it->second < now);
}

void DedupBuffer::record(EventId id, double now) {
  std::erase_if(expiry_, [now](const auto& entry) { return entry.second < now; });
  expiry_[id] = now + ttl_;
}

bool single_hop_feasible(const HybNodeState& state, const HybContext& ctx, std::uint64_t payload_bits) {
  const double d = distance(state.location, ctx.bs);
  if (!link_feasible(ctx.radio, d)) return false;
  const std::int64_t cost = joules_to_pj(tx_energy(ctx.energy, payload_bits, d));
  return state.energy.residual_pj() >= state.energy.threshold_pj() + cost;
}

std::optional<NodeId> best_neighbour(const HybNodeState& state, const DataPacket& packet,
                                     const HybContext& ctx, const std::set<NodeId>& exclude) {
  if (state.row.kind != NeighbourRow::Kind::Neighbours) return std::nullopt;
  std::optional<NodeId> best;
  std::uint64_t best_count = 0;
  for (NodeId v : state.row.neighbours) {
    if (packet.has_visited(v) || exclude.count(v)) continue;
    if (ctx.alive && !ctx.alive(v)) continue;
    if (ctx.locations == nullptr || !ctx.locations->contains(v)) continue;
    if (!link_feasible(ctx.radio, distance(state.location, ctx.locations->at(v)))) continue;
    auto it = state.use_count.find(v);
    const std::uint64_t count = it == state.use_count.end() ? 0 : it->second;
    // strict < keeps the earliest row position among equal counts
    if (!best || count < best_count) {
      best = v;
      best_count = count;
    }
  }
  return best;
}

namespace {

Action route(const HybNodeState& state, const DataPacket& packet, const HybContext& ctx) {
  if (single_hop_feasible(state, ctx, packet.payload_bits)) return Action::send_direct();
  if (auto next = best_neighbour(state, packet, ctx)) return Action::forward(*next);
  return Action::drop(DropReason::NoRoute);
}

}  // namespace

Action on_sense(HybNodeState& state, EventId event, double now, const HybContext& ctx,
                std::uint64_t payload_bits) {
  if (state.asleep()) return Action::drop(DropReason::Asleep);
  if (state.dedup.contains(event, now)) return Action::drop(DropReason::Duplicate);
  state.dedup.record(event, now);
  const DataPacket probe = DataPacket::make(0, event, state.id, payload_bits, now);
  return route(state, probe, ctx);
}

Action on_receive(HybNodeState& state, DataPacket& packet, double now, const HybContext& ctx) {
  if (state.asleep()) return Action::drop(DropReason::Asleep);
  if (state.dedup.contains(packet.event_id, now)) return Action::drop(DropReason::Duplicate);
  state.dedup.record(packet.event_id, now);
  packet.append_hop(state.id);
  return route(state, packet, ctx);
}

Action on_busy_channel(const HybNodeState& state, const DataPacket& packet,
                       const std::set<NodeId>& attempted, double now, const HybContext& ctx) {
  if (!(now - packet.created_at < ctx.wait_t)) return Action::drop(DropReason::Congestion);
  if (auto next = best_neighbour(state, packet, ctx, attempted)) return Action::forward(*next);
  return Action::drop(DropReason::NoRoute);
}

void note_forward(HybNodeState& state, NodeId neighbour) {
  if (state.row.kind != NeighbourRow::Kind::Neighbours) return;
  const auto& ids = state.row.neighbours;
  if (std::find(ids.begin(), ids.end(), neighbour) == ids.end()) return;
  ++state.use_count[neighbour];
}

void apply_row(HybNodeState& state, NeighbourRow row) {
  state.row = std::move(row);
  std::erase_if(state.use_count, [&](const auto& entry) {
    const auto& ids = state.row.neighbours;
    return std::find(ids.begin(), ids.end(), entry.first) == ids.end();
  });
}

EnergyReport report_residual(const HybNodeState& state) {
  return {state.id, state.energy.residual(), state.energy.residual_pj()};
}

}  // namespace wsnsim::hyb
