#include "wsnsim/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "text.hpp"
#include "wsnsim/radio.hpp"

namespace wsnsim {

std::uint64_t MetricsReport::dropped_total() const {
  return std::accumulate(dropped.begin(), dropped.end(), std::uint64_t{0});
}

namespace {

std::optional<DropReason> parse_reason(std::string_view s) {
  for (DropReason r : {DropReason::Asleep, DropReason::Duplicate, DropReason::NoRoute, DropReason::Congestion}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

}  // namespace

MetricsReport collect(const std::vector<LogRecord>& log) {
  MetricsReport m;
  std::uint64_t hop_sum = 0;
  std::int64_t consumed_pj = 0;
  std::set<EventId> events_delivered;
  std::size_t line = 0;

  for (const auto& r : log) {
    ++line;
    if (is_frame(r.kind)) {
      ++m.signals;
      continue;
    }
    switch (r.kind) {
      case LogKind::Sense:
        ++m.generated;
        break;
      case LogKind::Collision:
        ++m.collisions;
        break;
      case LogKind::Deliver: {
        if (!r.outcome.starts_with("HOPS=")) throw ParseError(line, "DELIVER without HOPS=");
        const auto hops = text::to_int<std::uint64_t>(std::string_view(r.outcome).substr(5));
        if (!hops) throw ParseError(line, "bad hop count");
        ++m.delivered;
        hop_sum += *hops;
        if (r.event) events_delivered.insert(*r.event);
        m.execution_time = std::max(m.execution_time, r.time);
        break;
      }
      case LogKind::Drop: {
        const auto reason = parse_reason(r.outcome);
        if (!reason) throw ParseError(line, "unknown drop reason '" + r.outcome + "'");
        ++m.dropped[static_cast<std::size_t>(*reason)];
        m.execution_time = std::max(m.execution_time, r.time);
        break;
      }
      case LogKind::Energy: {
        const auto colon = r.outcome.find(':');
        if (!r.tx || colon == std::string::npos) throw ParseError(line, "ENERGY needs node and residual:consumed");
        const auto residual = parse_pj(std::string_view(r.outcome).substr(0, colon));
        const auto consumed = parse_pj(std::string_view(r.outcome).substr(colon + 1));
        if (!residual || !consumed) throw ParseError(line, "bad energy value");
        m.residual_energy[*r.tx] = pj_to_joules(*residual);
        consumed_pj += *consumed;
        break;
      }
      default:
        break;
    }
  }
  m.avg_hop_count = m.delivered ? static_cast<double>(hop_sum) / static_cast<double>(m.delivered) : 0.0;
  m.unique_events_delivered = events_delivered.size();
  m.energy_consumed = pj_to_joules(consumed_pj);
  return m;
}

MetricsReport collect(std::string_view log_text) { return collect(parse_log(log_text)); }

}  // namespace wsnsim
