#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wsnsim/metrics.hpp"
#include "wsnsim/scenario.hpp"

namespace wsnsim {

struct RunRow {
  Protocol protocol = Protocol::Hyb;
  std::uint32_t node_count = 0;
  std::uint64_t seed = 0;
  MetricsReport report;
  double wall_seconds = 0.0;
};

struct Spread {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct SummaryRow {
  Protocol protocol = Protocol::Hyb;
  std::uint32_t node_count = 0;
  std::size_t runs = 0;
  Spread execution_time;
  Spread avg_hop_count;
  Spread collisions;
  Spread signals;
  Spread delivered;
  Spread energy_consumed;
};

struct ComparisonTable {
  std::vector<RunRow> runs;        // ordered by node_count, protocol, seed
  std::vector<SummaryRow> summary;  // ordered by node_count, protocol
};

struct RunFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CompareOptions {
  std::vector<Protocol> protocols;
  std::vector<std::uint64_t> seeds;
  std::vector<std::uint32_t> node_counts;  // empty: the scenario's own count
  unsigned threads = 0;                    // 0: hardware concurrency
};

/// Runs every (node_count, protocol, seed) combination, in parallel, and
/// aggregates per (node_count, protocol). Throws RunFailure naming the failed
/// runs.
ComparisonTable compare(const Scenario& base, const CompareOptions& options);

std::vector<SummaryRow> summarize(const std::vector<RunRow>& runs);

std::string runs_csv(const std::vector<RunRow>& runs);
std::string summary_csv(const std::vector<SummaryRow>& summary);

/// Reads a runs CSV back; throws ParseError naming the line.
std::vector<RunRow> parse_runs_csv(std::string_view text);

struct DominanceCheck {
  bool ok = true;
  std::vector<std::string> failures;
};

/// HYB versus every other protocol in the table: mean execution time, hop
/// count and signals at every node count; collisions in a majority of seeds
/// at 50 or more nodes.
DominanceCheck check_dominance(const ComparisonTable& table);

}  // namespace wsnsim
