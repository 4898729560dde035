#include "wsnsim/compare.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <map>
#include <mutex>
#include <thread>

#include "text.hpp"
#include "wsnsim/engine.hpp"

namespace wsnsim {
namespace {

std::string num(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

Spread spread(const std::vector<double>& xs) {
  Spread s;
  if (xs.empty()) return s;
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  return s;
}

constexpr std::string_view kRunsHeader =
    "protocol,node_count,seed,execution_time_s,avg_hop_count,collisions,signals,generated,delivered,"
    "dropped_asleep,dropped_duplicate,dropped_no_route,dropped_congestion";

}  // namespace

ComparisonTable compare(const Scenario& base, const CompareOptions& options) {
  if (options.protocols.empty()) throw ConfigError("compare needs at least one protocol");
  if (options.seeds.empty()) throw ConfigError("compare needs at least one seed");

  std::vector<std::uint32_t> counts = options.node_counts;
  if (counts.empty()) counts.push_back(base.locations ? static_cast<std::uint32_t>(base.locations->size()) : base.node_count);

  std::vector<RunRow> rows;
  for (auto n : counts) {
    for (auto p : options.protocols) {
      for (auto seed : options.seeds) rows.push_back(RunRow{p, n, seed, {}, 0.0});
    }
  }

  std::vector<std::string> errors(rows.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      Scenario s = base;
      s.protocol = rows[i].protocol;
      s.seed = rows[i].seed;
      if (!options.node_counts.empty()) s.node_count = rows[i].node_count;
      try {
        Simulator sim(std::move(s));
        RunResult r = sim.run();
        rows[i].report = r.report;
        rows[i].wall_seconds = r.wall_seconds;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(rows.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string failed;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (errors[i].empty()) continue;
    failed += std::string(to_string(rows[i].protocol)) + " nodes=" + std::to_string(rows[i].node_count) +
              " seed=" + std::to_string(rows[i].seed) + ": " + errors[i] + "\n";
  }
  if (!failed.empty()) throw RunFailure(failed);

  ComparisonTable table;
  table.runs = std::move(rows);
  table.summary = summarize(table.runs);
  return table;
}

std::vector<SummaryRow> summarize(const std::vector<RunRow>& runs) {
  std::map<std::pair<std::uint32_t, Protocol>, std::vector<const RunRow*>> groups;
  for (const auto& r : runs) groups[{r.node_count, r.protocol}].push_back(&r);

  std::vector<SummaryRow> out;
  for (const auto& [key, members] : groups) {
    const auto metric = [&](auto get) {
      std::vector<double> xs;
      for (const RunRow* r : members) xs.push_back(static_cast<double>(get(r->report)));
      return spread(xs);
    };
    SummaryRow s;
    s.node_count = key.first;
    s.protocol = key.second;
    s.runs = members.size();
    s.execution_time = metric([](const MetricsReport& m) { return m.execution_time; });
    s.avg_hop_count = metric([](const MetricsReport& m) { return m.avg_hop_count; });
    s.collisions = metric([](const MetricsReport& m) { return m.collisions; });
    s.signals = metric([](const MetricsReport& m) { return m.signals; });
    s.delivered = metric([](const MetricsReport& m) { return m.delivered; });
    s.energy_consumed = metric([](const MetricsReport& m) { return m.energy_consumed; });
    out.push_back(s);
  }
  return out;
}

std::string runs_csv(const std::vector<RunRow>& runs) {
  std::string out(kRunsHeader);
  out += '\n';
  for (const auto& r : runs) {
    const auto& m = r.report;
    out += std::string(to_string(r.protocol)) + ',' + std::to_string(r.node_count) + ',' + std::to_string(r.seed) +
           ',' + num(m.execution_time) + ',' + num(m.avg_hop_count) + ',' + std::to_string(m.collisions) + ',' +
           std::to_string(m.signals) + ',' + std::to_string(m.generated) + ',' + std::to_string(m.delivered);
    for (auto d : m.dropped) out += ',' + std::to_string(d);
    out += '\n';
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& summary) {
  std::string out = "protocol,node_count,runs";
  for (const char* name :
       {"execution_time_s", "avg_hop_count", "collisions", "signals", "delivered", "energy_consumed_j"}) {
    for (const char* stat : {"mean", "min", "max"}) out += std::string(",") + name + "_" + stat;
  }
  out += '\n';
  for (const auto& s : summary) {
    out += std::string(to_string(s.protocol)) + ',' + std::to_string(s.node_count) + ',' + std::to_string(s.runs);
    for (const Spread* sp :
         {&s.execution_time, &s.avg_hop_count, &s.collisions, &s.signals, &s.delivered, &s.energy_consumed}) {
      out += ',' + num(sp->mean) + ',' + num(sp->min) + ',' + num(sp->max);
    }
    out += '\n';
  }
  return out;
}

std::vector<RunRow> parse_runs_csv(std::string_view text) {
  const auto ls = text::lines(text);
  if (ls.empty() || text::trim(ls[0]) != kRunsHeader) throw ParseError(1, "missing or unexpected CSV header");
  std::vector<RunRow> out;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const std::size_t line = i + 1;
    if (text::trim(ls[i]).empty()) continue;
    const auto cells = text::split(text::trim(ls[i]), ',');
    if (cells.size() != 13) throw ParseError(line, "expected 13 columns");
    const auto u64 = [&](std::size_t c) {
      auto v = text::to_int<std::uint64_t>(cells[c]);
      if (!v) throw ParseError(line, "bad integer '" + std::string(cells[c]) + "'");
      return *v;
    };
    const auto dbl = [&](std::size_t c) {
      auto v = text::to_double(cells[c]);
      if (!v) throw ParseError(line, "bad number '" + std::string(cells[c]) + "'");
      return *v;
    };
    RunRow r;
    try {
      r.protocol = parse_protocol(cells[0]);
    } catch (const ConfigError& e) {
      throw ParseError(line, e.what());
    }
    r.node_count = static_cast<std::uint32_t>(u64(1));
    r.seed = u64(2);
    r.report.execution_time = dbl(3);
    r.report.avg_hop_count = dbl(4);
    r.report.collisions = u64(5);
    r.report.signals = u64(6);
    r.report.generated = u64(7);
    r.report.delivered = u64(8);
    for (std::size_t d = 0; d < 4; ++d) r.report.dropped[d] = u64(9 + d);
    out.push_back(std::move(r));
  }
  return out;
}

DominanceCheck check_dominance(const ComparisonTable& table) {
  DominanceCheck check;
  const auto fail = [&](std::string what) {
    check.ok = false;
    check.failures.push_back(std::move(what));
  };

  std::map<std::pair<std::uint32_t, Protocol>, const SummaryRow*> summary;
  for (const auto& s : table.summary) summary[{s.node_count, s.protocol}] = &s;

  for (const auto& [key, hyb] : summary) {
    if (key.second != Protocol::Hyb) continue;
    const std::uint32_t n = key.first;
    for (const auto& [other_key, other] : summary) {
      if (other_key.first != n || other_key.second == Protocol::Hyb) continue;
      const std::string tag = " (" + std::to_string(n) + " nodes, vs " + std::string(to_string(other_key.second)) + ")";
      if (!(hyb->execution_time.mean < other->execution_time.mean)) fail("execution time" + tag);
      if (!(hyb->avg_hop_count.mean <= other->avg_hop_count.mean)) fail("hop count" + tag);
      if (!(hyb->signals.mean < other->signals.mean)) fail("signals" + tag);
      if (n < 50) continue;

      std::size_t wins = 0, seeds = 0;
      for (const auto& h : table.runs) {
        if (h.protocol != Protocol::Hyb || h.node_count != n) continue;
        for (const auto& o : table.runs) {
          if (o.protocol != other_key.second || o.node_count != n || o.seed != h.seed) continue;
          ++seeds;
          if (h.report.collisions < o.report.collisions) ++wins;
        }
      }
      if (seeds > 0 && 2 * wins <= seeds) fail("collisions" + tag);
    }
  }
  return check;
}

}  // namespace wsnsim
