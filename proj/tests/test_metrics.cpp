#include <doctest.h>

#include "wsnsim/metrics.hpp"

using namespace wsnsim;

TEST_SUITE("metrics") {
  TEST_CASE("empty log gives an all-zero report") {
    CHECK(collect(std::string_view{}) == MetricsReport{});
    CHECK(collect(std::vector<LogRecord>{}) == MetricsReport{});
  }

  TEST_CASE("one direct delivery") {
    const MetricsReport m = collect(
        "0.000000000 SENSE 0 - 1 GEN\n"
        "0.000000000 DATA 0 BS 1 TX\n"
        "0.002368000 DELIVER 0 BS 1 HOPS=0\n");
    CHECK(m.avg_hop_count == 0.0);
    CHECK(m.signals >= 1);
    CHECK(m.delivered == 1);
    CHECK(m.execution_time == doctest::Approx(0.002368));
  }

  TEST_CASE("hand-counted ten-line fixture") {
    const char* log =
        "0.000000000 LOC 0 BS - TX\n"          // signal 1
        "0.000000000 TABLE BS 0 - TX\n"        // signal 2
        "0.125000000 SENSE 0 - 1 GEN\n"        // generated 1
        "0.125000000 SENSE 1 - 1 GEN\n"        // generated 2
        "0.125000000 DATA 0 2 1 TX\n"          // signal 3
        "0.125000000 DATA 1 2 1 TX\n"          // signal 4
        "0.125000000 COLLISION 1 0 1 LOST\n"   // collision 1
        "0.130000000 DROP 0 - 1 CONGESTION\n"  // dropped congestion
        "0.200000000 DELIVER 2 BS 1 HOPS=2\n"  // delivered, 2 hops
        "0.300000000 ENERGY 0 - - 9.5:0.5\n";
    const MetricsReport m = collect(log);
    CHECK(m.signals == 4);
    CHECK(m.generated == 2);
    CHECK(m.collisions == 1);
    CHECK(m.delivered == 1);
    CHECK(m.dropped_for(DropReason::Congestion) == 1);
    CHECK(m.dropped_total() == 1);
    CHECK(m.avg_hop_count == 2.0);
    CHECK(m.unique_events_delivered == 1);
    CHECK(m.execution_time == doctest::Approx(0.2));
    CHECK(m.residual_energy.at(0) == 9.5);
    CHECK(m.energy_consumed == 0.5);
  }

  TEST_CASE("collect is a pure function of the log") {
    const char* log = "0.1 SENSE 0 - 1 GEN\n0.2 DROP 0 - 1 NO_ROUTE\n";
    CHECK(collect(log) == collect(log));
  }

  TEST_CASE("bad outcomes name the line") {
    try {
      collect("0.1 SENSE 0 - 1 GEN\n0.2 DROP 0 - 1 TIRED\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(collect("0.2 DELIVER 0 BS 1 X\n"), ParseError);
  }
}
