#include "wsnsim/channel.hpp"

#include <algorithm>
#include <stdexcept>

namespace wsnsim {

Channel::Channel(std::map<NodeId, Location> positions, double radio_range)
    : positions_(std::move(positions)), range_sq_(radio_range * radio_range) {
  for (const auto& [a, la] : positions_) {
    auto& list = neighbours_[a];
    for (const auto& [b, lb] : positions_) {
      if (a != b && distance_sq(la, lb) <= range_sq_) list.push_back(b);
    }
  }
}

bool Channel::in_range(NodeId a, NodeId b) const {
  auto ia = positions_.find(a);
  auto ib = positions_.find(b);
  if (ia == positions_.end() || ib == positions_.end()) return false;
  return distance_sq(ia->second, ib->second) <= range_sq_;
}

const std::vector<NodeId>& Channel::neighbours(NodeId n) const {
  static const std::vector<NodeId> kNone;
  auto it = neighbours_.find(n);
  return it == neighbours_.end() ? kNone : it->second;
}

bool Channel::hears(NodeId node, const ActiveTransmission& t) const {
  return node == t.tx || node == t.rx || in_range(node, t.tx);
}

bool Channel::senses_activity(NodeId node, std::uint64_t batch) const {
  return busy_until(node, batch).has_value();
}

std::optional<double> Channel::busy_until(NodeId node, std::uint64_t batch) const {
  std::optional<double> until;
  for (const auto& [id, t] : active_) {
    if (t.batch >= batch || !hears(node, t)) continue;
    if (!until || t.end > *until) until = t.end;
  }
  return until;
}

ArbitrationResult Channel::arbitrate(NodeId tx, NodeId rx, double start, double end, std::uint64_t batch,
                                     const std::function<bool(NodeId)>& listening) {
  ArbitrationResult result;
  const bool unicast = rx != kBroadcast;

  for (const auto& [id, t] : active_) {
    if (t.tx == tx || t.rx == tx) return result;  // half duplex
    if (unicast && hears(rx, t)) return result;
  }
  if (unicast && (!listening(rx) || !in_range(tx, rx))) return result;

  ActiveTransmission fresh;
  fresh.id = next_id_++;
  fresh.tx = tx;
  fresh.rx = rx;
  fresh.start = start;
  fresh.end = end;
  fresh.batch = batch;
  if (unicast) {
    fresh.receivers = {rx};
  } else {
    for (NodeId n : neighbours(tx)) {
      if (listening(n)) fresh.receivers.push_back(n);
    }
  }

  for (auto& [id, t] : active_) {
    bool overlap = false;
    // the new frame reaching one of t's receivers
    for (NodeId r : t.receivers) {
      if (t.corrupted.count(r)) continue;
      if (r == tx || in_range(r, tx)) {
        t.corrupted.insert(r);
        overlap = true;
      }
    }
    // t reaching one of the new frame's receivers (broadcast only; a unicast
    // receiver that hears t was refused above)
    for (NodeId r : fresh.receivers) {
      if (fresh.corrupted.count(r)) continue;
      if (hears(r, t)) {
        fresh.corrupted.insert(r);
        overlap = true;
      }
    }
    if (overlap) {
      if (t.unicast() && t.corrupted.count(t.rx)) t.lost = true;
      result.victims.push_back(id);
    }
  }

  if (!result.victims.empty()) {
    result.outcome = Arbitration::Collision;
    if (unicast) {
      fresh.lost = true;
      fresh.corrupted.insert(rx);
    }
  } else {
    result.outcome = Arbitration::Grant;
  }
  result.transmission = fresh.id;
  active_.emplace(fresh.id, std::move(fresh));
  return result;
}

const ActiveTransmission* Channel::find(std::uint64_t id) const {
  auto it = active_.find(id);
  return it == active_.end() ? nullptr : &it->second;
}

ActiveTransmission Channel::release(std::uint64_t id) {
  auto it = active_.find(id);
  if (it == active_.end()) throw std::logic_error("release of unknown transmission");
  ActiveTransmission t = std::move(it->second);
  active_.erase(it);
  return t;
}

std::size_t Channel::reservations(NodeId node) const {
  return static_cast<std::size_t>(std::count_if(active_.begin(), active_.end(), [&](const auto& entry) {
    return entry.second.unicast() && entry.second.rx == node;
  }));
}

}  // namespace wsnsim
