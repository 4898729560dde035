#include "wsnsim/event_log.hpp"

#include <array>
#include <cstdio>

#include "text.hpp"

namespace wsnsim {

namespace {

constexpr std::array<std::pair<LogKind, std::string_view>, 12> kKindNames{{
    {LogKind::Sense, "SENSE"},
    {LogKind::Data, "DATA"},
    {LogKind::Rreq, "RREQ"},
    {LogKind::Rrep, "RREP"},
    {LogKind::Report, "REPORT"},
    {LogKind::Loc, "LOC"},
    {LogKind::Table, "TABLE"},
    {LogKind::Collision, "COLLISION"},
    {LogKind::Deliver, "DELIVER"},
    {LogKind::Drop, "DROP"},
    {LogKind::Refresh, "REFRESH"},
    {LogKind::Energy, "ENERGY"},
}};

std::optional<NodeId> parse_node(std::string_view t, bool& ok) {
  ok = true;
  if (t == "-") return std::nullopt;
  if (t == "BS") return kBaseStation;
  if (t == "*") return kBroadcast;
  auto id = text::to_int<NodeId>(t);
  if (!id) ok = false;
  return id;
}

}  // namespace

std::string_view to_string(LogKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<LogKind> parse_log_kind(std::string_view token) {
  for (const auto& [k, name] : kKindNames) {
    if (name == token) return k;
  }
  return std::nullopt;
}

bool is_frame(LogKind kind) {
  switch (kind) {
    case LogKind::Data:
    case LogKind::Rreq:
    case LogKind::Rrep:
    case LogKind::Report:
    case LogKind::Loc:
    case LogKind::Table:
      return true;
    default:
      return false;
  }
}

std::string format_record(const LogRecord& r) {
  char time_buf[48];
  std::snprintf(time_buf, sizeof time_buf, "%.9f", r.time);
  std::string out = time_buf;
  out += ' ';
  out += to_string(r.kind);
  out += ' ';
  out += r.tx ? node_token(*r.tx) : "-";
  out += ' ';
  out += r.rx ? node_token(*r.rx) : "-";
  out += ' ';
  out += r.event ? std::to_string(*r.event) : "-";
  out += ' ';
  out += r.outcome.empty() ? "-" : r.outcome;
  return out;
}

std::string format_log(const std::vector<LogRecord>& log) {
  std::string out;
  out.reserve(log.size() * 48);
  for (const auto& r : log) {
    out += format_record(r);
    out += '\n';
  }
  return out;
}

std::vector<LogRecord> parse_log(std::string_view content) {
  std::vector<LogRecord> out;
  std::size_t line_no = 0;
  for (std::string_view line : text::lines(content)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto f = text::fields(line);
    if (f.size() != 6) throw ParseError(line_no, "expected 6 fields");
    LogRecord r;
    const auto t = text::to_double(f[0]);
    if (!t) throw ParseError(line_no, "bad time");
    r.time = *t;
    const auto kind = parse_log_kind(f[1]);
    if (!kind) throw ParseError(line_no, "unknown kind '" + std::string(f[1]) + "'");
    r.kind = *kind;
    bool ok = true;
    r.tx = parse_node(f[2], ok);
    if (!ok) throw ParseError(line_no, "bad transmitter");
    r.rx = parse_node(f[3], ok);
    if (!ok) throw ParseError(line_no, "bad receiver");
    if (f[4] != "-") {
      const auto e = text::to_int<EventId>(f[4]);
      if (!e) throw ParseError(line_no, "bad event id");
      r.event = *e;
    }
    r.outcome = f[5] == "-" ? std::string{} : std::string(f[5]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_pj(std::int64_t pj) {
  const bool neg = pj < 0;
  const std::uint64_t mag = neg ? static_cast<std::uint64_t>(-pj) : static_cast<std::uint64_t>(pj);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%llu.%012llu", neg ? "-" : "", static_cast<unsigned long long>(mag / 1000000000000ULL),
                static_cast<unsigned long long>(mag % 1000000000000ULL));
  return buf;
}

std::optional<std::int64_t> parse_pj(std::string_view s) {
  bool neg = false;
  if (!s.empty() && s.front() == '-') {
    neg = true;
    s.remove_prefix(1);
  }
  const auto dot = s.find('.');
  const auto whole = text::to_int<std::int64_t>(dot == std::string_view::npos ? s : s.substr(0, dot));
  if (!whole) return std::nullopt;
  std::int64_t frac = 0;
  if (dot != std::string_view::npos) {
    std::string digits(s.substr(dot + 1));
    if (digits.size() > 12) return std::nullopt;
    digits.resize(12, '0');
    const auto f = text::to_int<std::int64_t>(digits);
    if (!f) return std::nullopt;
    frac = *f;
  }
  const std::int64_t v = *whole * 1000000000000LL + frac;
  return neg ? -v : v;
}

}  // namespace wsnsim
