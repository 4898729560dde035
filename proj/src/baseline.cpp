#include <algorithm>

#include "wsnsim/agents.hpp"

namespace wsnsim {

void RouteCache::add(std::vector<NodeId> route) {
  if (route.size() >= 2) routes_.insert(std::move(route));
}

std::optional<std::vector<NodeId>> RouteCache::best() const {
  const std::vector<NodeId>* best = nullptr;
  for (const auto& r : routes_) {
    if (!best || r.size() < best->size()) best = &r;
  }
  if (!best) return std::nullopt;
  return *best;
}

void RouteCache::purge_link(NodeId a, NodeId b) {
  std::erase_if(routes_, [&](const std::vector<NodeId>& r) {
    for (std::size_t i = 1; i < r.size(); ++i) {
      if (r[i - 1] == a && r[i] == b) return true;
    }
    return false;
  });
}

BaselineAgent::BaselineAgent(Simulator& sim, Mode mode) : Agent(sim), mode_(mode) {}

std::optional<RouteTableEntry> BaselineAgent::route(NodeId node) const {
  auto it = nodes_.find(node);
  if (it == nodes_.end()) return std::nullopt;
  return it->second.route;
}

const RouteCache* BaselineAgent::cache(NodeId node) const {
  auto it = nodes_.find(node);
  return it == nodes_.end() ? nullptr : &it->second.cache;
}

bool BaselineAgent::has_route(NodeId node) const {
  auto it = nodes_.find(node);
  if (it == nodes_.end()) return false;
  return mode_ == Mode::Aodv ? it->second.route.has_value() : it->second.cache.size() > 0;
}

void BaselineAgent::on_sense(NodeId node, EventId event) {
  DataPacket packet =
      DataPacket::make(sim_.new_packet_uid(), event, node, sim_.scenario().payload_bits(), sim_.now());
  sim_.log_generated(packet);
  originate(node, std::move(packet));
}

void BaselineAgent::originate(NodeId node, DataPacket packet) {
  if (node == kBaseStation) {
    sim_.deliver(packet, node);
    return;
  }
  if (!sim_.alive(node)) {
    sim_.drop(packet, node, DropReason::Asleep);
    return;
  }
  if (has_route(node)) {
    send_data(node, std::move(packet));
    return;
  }
  auto& st = state(node);
  if (st.discovery) {
    st.discovery->buffered.push_back(std::move(packet));
    return;
  }
  st.discovery = Discovery{};
  st.discovery->buffered.push_back(std::move(packet));
  start_discovery(node);
}

void BaselineAgent::start_discovery(NodeId node) {
  auto& st = state(node);
  const std::uint64_t id = st.next_rreq++;
  st.discovery->rreq_id = id;
  ++st.discovery->attempts;
  st.seen.insert({node, id});

  RouteRequest req;
  req.rreq_id = id;
  req.origin = node;
  if (mode_ == Mode::Dsr) req.route_record = {node};

  Frame f;
  f.type = FrameType::Rreq;
  f.tx = node;
  f.rx = kBroadcast;
  f.bits = sim_.scenario().control_frame_bits;
  f.payload = std::move(req);
  sim_.transmit(std::move(f));
  sim_.set_timer(sim_.scenario().baseline.discovery_timeout, node, id);
}

void BaselineAgent::on_timer(NodeId node, std::uint64_t token) {
  auto& st = state(node);
  if (!st.discovery || st.discovery->rreq_id != token) return;
  const bool awake = sim_.alive(node);
  if (awake && st.discovery->attempts <= sim_.scenario().baseline.discovery_retries) {
    start_discovery(node);
    return;
  }
  std::vector<DataPacket> buffered = std::move(st.discovery->buffered);
  st.discovery.reset();
  for (const auto& p : buffered) sim_.drop(p, node, awake ? DropReason::NoRoute : DropReason::Asleep);
}

void BaselineAgent::complete_discovery(NodeId node) {
  auto& st = state(node);
  if (!st.discovery) return;
  std::vector<DataPacket> buffered = std::move(st.discovery->buffered);
  st.discovery.reset();
  for (auto& p : buffered) send_data(node, std::move(p));
}

void BaselineAgent::send_data(NodeId node, DataPacket packet) {
  auto& st = state(node);
  NodeId next = 0;
  if (mode_ == Mode::Aodv) {
    if (!st.route) {
      sim_.drop(packet, node, DropReason::NoRoute);
      return;
    }
    next = st.route->next_hop;
  } else {
    if (node == packet.origin) {
      auto best = st.cache.best();
      if (!best) {
        sim_.drop(packet, node, DropReason::NoRoute);
        return;
      }
      packet.source_route = std::move(*best);
    }
    const auto& r = packet.source_route;
    auto it = std::find(r.begin(), r.end(), node);
    if (it == r.end() || it + 1 == r.end()) {
      sim_.drop(packet, node, DropReason::NoRoute);
      return;
    }
    next = *(it + 1);
  }

  Frame f;
  f.type = FrameType::Data;
  f.tx = node;
  f.rx = next;
  f.bits = packet.payload_bits;
  f.payload = std::move(packet);
  unicast(std::move(f));
}

void BaselineAgent::unicast(Frame frame, std::uint32_t attempts, double delay) {
  const std::uint64_t handle = sim_.transmit(frame, delay);
  retries_.emplace(handle, Retry{std::move(frame), attempts});
}

void BaselineAgent::on_tx_result(const Frame& frame, TxResult result) {
  auto it = retries_.find(frame.handle);
  if (it == retries_.end()) return;

  switch (result) {
    case TxResult::Granted:
      return;
    case TxResult::Delivered:
      retries_.erase(it);
      return;
    case TxResult::Busy:
    case TxResult::Collided:
    case TxResult::Lost: {
      Retry r = std::move(it->second);
      retries_.erase(it);
      const auto& cfg = sim_.scenario().baseline;
      const std::uint32_t attempt = r.attempts + 1;
      if (attempt > cfg.data_retries) {
        give_up(r.frame);
        return;
      }
      const double backoff = cfg.retry_backoff * attempt + sim_.jitter().uniform(0.0, cfg.retry_backoff);
      unicast(std::move(r.frame), attempt, backoff);
      return;
    }
    case TxResult::Expired:
      give_up(it->second.frame);
      retries_.erase(it);
      return;
    case TxResult::Asleep:
      if (frame.type == FrameType::Data) sim_.drop(frame.data(), frame.tx, DropReason::Asleep);
      retries_.erase(it);
      return;
  }
}

void BaselineAgent::give_up(const Frame& frame) {
  if (frame.type != FrameType::Data) return;
  const DataPacket& p = frame.data();
  sim_.drop(p, frame.tx, DropReason::Congestion);
  for (NodeId v : p.visited) {
    auto& st = state(v);
    if (mode_ == Mode::Aodv) {
      st.route.reset();
    } else {
      st.cache.purge_link(frame.tx, frame.rx);
    }
  }
}

void BaselineAgent::on_receive(NodeId node, const Frame& frame) {
  switch (frame.type) {
    case FrameType::Rreq:
      handle_rreq(node, frame);
      return;
    case FrameType::Rrep:
      handle_rrep(node, frame);
      return;
    case FrameType::Data:
      handle_data(node, frame);
      return;
  }
}

void BaselineAgent::handle_rreq(NodeId node, const Frame& frame) {
  RouteRequest req = std::get<RouteRequest>(frame.payload);
  auto& st = state(node);
  if (!st.seen.insert({req.origin, req.rreq_id}).second) return;

  if (node == kBaseStation) {
    RouteReply rep;
    rep.rreq_id = req.rreq_id;
    rep.origin = req.origin;
    if (mode_ == Mode::Dsr) {
      rep.route = req.route_record;
      rep.route.push_back(kBaseStation);
    }
    Frame f;
    f.type = FrameType::Rrep;
    f.tx = node;
    f.rx = frame.tx;
    f.bits = sim_.scenario().control_frame_bits;
    f.payload = std::move(rep);
    unicast(std::move(f));
    return;
  }

  st.reverse[{req.origin, req.rreq_id}] = frame.tx;
  ++req.hop_count;
  if (mode_ == Mode::Dsr) req.route_record.push_back(node);

  Frame f;
  f.type = FrameType::Rreq;
  f.tx = node;
  f.rx = kBroadcast;
  f.bits = sim_.scenario().control_frame_bits;
  f.payload = std::move(req);
  sim_.transmit(std::move(f), sim_.jitter().uniform(0.0, sim_.scenario().baseline.broadcast_jitter));
}

void BaselineAgent::handle_rrep(NodeId node, const Frame& frame) {
  RouteReply rep = std::get<RouteReply>(frame.payload);
  auto& st = state(node);
  NodeId next = 0;

  if (mode_ == Mode::Aodv) {
    const RouteTableEntry entry{kBaseStation, frame.tx, rep.hop_count + 1, rep.rreq_id};
    if (!st.route || st.route->freshness < entry.freshness || st.route->hop_count > entry.hop_count) {
      st.route = entry;
    }
    if (node == rep.origin) {
      complete_discovery(node);
      return;
    }
    auto it = st.reverse.find({rep.origin, rep.rreq_id});
    if (it == st.reverse.end()) return;
    next = it->second;
  } else {
    auto it = std::find(rep.route.begin(), rep.route.end(), node);
    if (it == rep.route.end()) return;
    st.cache.add(std::vector<NodeId>(it, rep.route.end()));
    if (node == rep.origin) {
      complete_discovery(node);
      return;
    }
    if (it == rep.route.begin()) return;
    next = *(it - 1);
  }

  ++rep.hop_count;
  Frame f;
  f.type = FrameType::Rrep;
  f.tx = node;
  f.rx = next;
  f.bits = sim_.scenario().control_frame_bits;
  f.payload = std::move(rep);
  unicast(std::move(f));
}

void BaselineAgent::handle_data(NodeId node, const Frame& frame) {
  DataPacket packet = frame.data();
  if (node == kBaseStation) {
    sim_.deliver(packet, frame.tx);
    return;
  }
  if (!sim_.alive(node)) {
    sim_.drop(packet, node, DropReason::Asleep);
    return;
  }
  if (packet.has_visited(node)) {
    sim_.drop(packet, node, DropReason::NoRoute);
    return;
  }
  packet.append_hop(node);
  if (mode_ == Mode::Dsr) {
    const auto& r = packet.source_route;
    auto it = std::find(r.begin(), r.end(), node);
    if (it != r.end()) state(node).cache.add(std::vector<NodeId>(it, r.end()));
  }
  send_data(node, std::move(packet));
}

}  // namespace wsnsim
