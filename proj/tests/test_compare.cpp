#include <doctest.h>

#include "wsnsim/compare.hpp"
#include "wsnsim/engine.hpp"

using namespace wsnsim;

namespace {

Scenario small() {
  Scenario s;
  s.node_count = 20;
  s.sim_time = 20;
  return s;
}

RunRow row(Protocol p, std::uint32_t n, std::uint64_t seed, double time, double hops, std::uint64_t collisions,
           std::uint64_t signals) {
  RunRow r;
  r.protocol = p;
  r.node_count = n;
  r.seed = seed;
  r.report.execution_time = time;
  r.report.avg_hop_count = hops;
  r.report.collisions = collisions;
  r.report.signals = signals;
  return r;
}

ComparisonTable table_of(std::vector<RunRow> runs) {
  ComparisonTable t;
  t.summary = summarize(runs);
  t.runs = std::move(runs);
  return t;
}

}  // namespace

TEST_SUITE("compare") {
  TEST_CASE("a single combination equals a direct run") {
    const Scenario base = small();
    const ComparisonTable t = compare(base, {{Protocol::Hyb}, {1}, {}, 1});
    REQUIRE(t.runs.size() == 1);
    Scenario direct = base;
    direct.seed = 1;
    direct.protocol = Protocol::Hyb;
    CHECK(t.runs[0].report == Simulator(direct).run().report);
    REQUIRE(t.summary.size() == 1);
    CHECK(t.summary[0].runs == 1);
    CHECK(t.summary[0].signals.mean == static_cast<double>(t.runs[0].report.signals));
  }

  TEST_CASE("3 protocols x 3 seeds: 9 rows, 3 summary rows, deterministic") {
    const CompareOptions opts{{Protocol::Hyb, Protocol::Aodv, Protocol::Dsr}, {1, 2, 3}, {}, 4};
    const ComparisonTable a = compare(small(), opts);
    CHECK(a.runs.size() == 9);
    CHECK(a.summary.size() == 3);
    for (std::size_t i = 1; i < a.runs.size(); ++i) {
      const auto& p = a.runs[i - 1];
      const auto& q = a.runs[i];
      CHECK(std::tie(p.node_count, p.protocol, p.seed) < std::tie(q.node_count, q.protocol, q.seed));
    }
    const ComparisonTable b = compare(small(), {opts.protocols, opts.seeds, {}, 1});
    CHECK(runs_csv(a.runs) == runs_csv(b.runs));
    CHECK(summary_csv(a.summary) == summary_csv(b.summary));
  }

  TEST_CASE("node-count sweep") {
    const ComparisonTable t = compare(small(), {{Protocol::Aodv}, {7}, {10, 15}, 2});
    REQUIRE(t.runs.size() == 2);
    CHECK(t.runs[0].node_count == 10);
    CHECK(t.runs[1].node_count == 15);
    CHECK(t.summary.size() == 2);
  }

  TEST_CASE("runs CSV round-trips") {
    const ComparisonTable t = compare(small(), {{Protocol::Hyb, Protocol::Dsr}, {4, 5}, {}, 2});
    const std::string csv = runs_csv(t.runs);
    CHECK(csv.rfind("protocol,node_count,seed,execution_time_s,avg_hop_count,collisions,signals,generated,"
                    "delivered,dropped_asleep,dropped_duplicate,dropped_no_route,dropped_congestion\n",
                    0) == 0);
    const auto back = parse_runs_csv(csv);
    REQUIRE(back.size() == t.runs.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      const auto& a = back[i].report;
      const auto& b = t.runs[i].report;
      CHECK(back[i].protocol == t.runs[i].protocol);
      CHECK(back[i].seed == t.runs[i].seed);
      CHECK(a.execution_time == b.execution_time);
      CHECK(a.avg_hop_count == b.avg_hop_count);
      CHECK(a.collisions == b.collisions);
      CHECK(a.signals == b.signals);
      CHECK(a.generated == b.generated);
      CHECK(a.delivered == b.delivered);
      CHECK(a.dropped == b.dropped);
    }
    CHECK(runs_csv(back) == csv);
  }

  TEST_CASE("malformed CSV names the line") {
    const std::string header =
        "protocol,node_count,seed,execution_time_s,avg_hop_count,collisions,signals,generated,delivered,"
        "dropped_asleep,dropped_duplicate,dropped_no_route,dropped_congestion\n";
    try {
      parse_runs_csv(header + "hyb,25,1,1.0,1.0,0,1,1,1,0,0,0,0\nhyb,25,x,1.0,1.0,0,1,1,1,0,0,0,0\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_runs_csv("nope\n"), ParseError);
    CHECK_THROWS_AS(parse_runs_csv(header + "hyb,25,1\n"), ParseError);
  }

  TEST_CASE("summary statistics") {
    const auto s = summarize({row(Protocol::Hyb, 25, 1, 1.0, 1.0, 2, 10), row(Protocol::Hyb, 25, 2, 3.0, 2.0, 4, 30)});
    REQUIRE(s.size() == 1);
    CHECK(s[0].execution_time.mean == 2.0);
    CHECK(s[0].execution_time.min == 1.0);
    CHECK(s[0].execution_time.max == 3.0);
    CHECK(s[0].signals.mean == 20.0);
    CHECK(s[0].collisions.max == 4.0);
  }

  TEST_CASE("dominance check") {
    SUBCASE("clear win") {
      auto t = table_of({row(Protocol::Hyb, 50, 1, 1, 1, 0, 10), row(Protocol::Hyb, 50, 2, 1, 1, 1, 10),
                         row(Protocol::Aodv, 50, 1, 2, 2, 3, 20), row(Protocol::Aodv, 50, 2, 2, 2, 3, 20)});
      CHECK(check_dominance(t).ok);
    }
    SUBCASE("slower execution fails") {
      auto t = table_of({row(Protocol::Hyb, 25, 1, 3, 1, 0, 10), row(Protocol::Dsr, 25, 1, 2, 2, 3, 20)});
      const auto d = check_dominance(t);
      CHECK_FALSE(d.ok);
      CHECK(d.failures.size() == 1);
    }
    SUBCASE("equal hops pass, equal signals fail") {
      auto t = table_of({row(Protocol::Hyb, 25, 1, 1, 2, 0, 20), row(Protocol::Aodv, 25, 1, 2, 2, 3, 20)});
      const auto d = check_dominance(t);
      CHECK_FALSE(d.ok);
      CHECK(d.failures.size() == 1);
    }
    SUBCASE("collisions only count from 50 nodes, by majority of seeds") {
      auto small_net = table_of({row(Protocol::Hyb, 25, 1, 1, 1, 9, 10), row(Protocol::Aodv, 25, 1, 2, 2, 3, 20)});
      CHECK(check_dominance(small_net).ok);
      auto split = table_of({row(Protocol::Hyb, 50, 1, 1, 1, 0, 10), row(Protocol::Hyb, 50, 2, 1, 1, 9, 10),
                             row(Protocol::Aodv, 50, 1, 2, 2, 3, 20), row(Protocol::Aodv, 50, 2, 2, 2, 3, 20)});
      CHECK_FALSE(check_dominance(split).ok);
    }
  }

  TEST_CASE("empty option lists are configuration errors") {
    CHECK_THROWS_AS(compare(small(), {{}, {1}, {}, 1}), ConfigError);
    CHECK_THROWS_AS(compare(small(), {{Protocol::Hyb}, {}, {}, 1}), ConfigError);
  }
}
