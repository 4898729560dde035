#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsnsim/types.hpp"

namespace wsnsim {

/// Record kinds. The frame kinds (DATA through TABLE) each stand for one
/// transmitted frame, i.e. one signal.
enum class LogKind {
  Sense,      // a node generated a packet for an event
  Data,
  Rreq,
  Rrep,
  Report,     // residual-energy report to the base station
  Loc,        // location upload during configuration
  Table,      // neighbour-row download from the base station
  Collision,  // two frames overlapped at a common receiver
  Deliver,    // packet reached the sink; outcome "HOPS=n"
  Drop,       // packet discarded; outcome is the reason
  Refresh,    // base station rebuilt the neighbour table; outcome "DEAD=n"
  Energy,     // end-of-run battery; outcome "residual_J:consumed_J"
};

std::string_view to_string(LogKind kind);
std::optional<LogKind> parse_log_kind(std::string_view token);
bool is_frame(LogKind kind);

/// One line of the event log: `time kind transmitter receiver event_id outcome`.
struct LogRecord {
  double time = 0.0;
  LogKind kind = LogKind::Sense;
  std::optional<NodeId> tx;  // "-" when absent
  std::optional<NodeId> rx;
  std::optional<EventId> event;
  std::string outcome;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

/// Fixed field order, times with nanosecond resolution.
std::string format_record(const LogRecord& r);
std::string format_log(const std::vector<LogRecord>& log);

/// Throws ParseError naming the offending line.
std::vector<LogRecord> parse_log(std::string_view text);

/// Exact decimal rendering of whole picojoules as joules ("9.876543210000").
std::string format_pj(std::int64_t pj);
std::optional<std::int64_t> parse_pj(std::string_view joules);

}  // namespace wsnsim
