#include <doctest.h>

#include <cmath>

#include <filesystem>
#include <fstream>

#include "wsnsim/event_queue.hpp"
#include "wsnsim/rng.hpp"
#include "wsnsim/scenario.hpp"

using namespace wsnsim;

TEST_SUITE("scenario") {
  TEST_CASE("defaults follow Table 1") {
    const Scenario s;
    CHECK(s.topology_width == 2000);
    CHECK(s.topology_height == 2000);
    CHECK(s.radio.radio_range == 350);
    CHECK(s.radio.bandwidth == 2e6);
    CHECK(s.radio.reception_threshold == -80);
    CHECK(s.traffic.rate == 8);
    CHECK(s.traffic.packet_size == 512);
    CHECK(s.payload_bits() == 4096);
    CHECK(s.energy.initial == 10);
    CHECK(s.energy.threshold == 1e-6);
    CHECK(s.region.band_halfwidth == 250);
    CHECK(s.region.max_neighbours == 3);
    CHECK_NOTHROW(s.validate());
  }

  TEST_CASE("parse_scenario reads keys, comments and blank lines") {
    const Scenario s = parse_scenario(
        "# comment\n"
        "topology_size = 500x400\n"
        "node_count = 7   # trailing comment\n"
        "\n"
        "bs_location = 250,200\n"
        "protocol = dsr\n"
        "seed = 42\n"
        "traffic.rate = 2.5\n"
        "region.vertical_extent = inf\n"
        "hyb.liveness = reported\n"
        "scripted_events = 1.5@10,20; 3@30,40\n");
    CHECK(s.topology_width == 500);
    CHECK(s.topology_height == 400);
    CHECK(s.node_count == 7);
    CHECK(s.bs_location == Location{250, 200});
    CHECK(s.protocol == Protocol::Dsr);
    CHECK(s.seed == 42);
    CHECK(s.traffic.rate == 2.5);
    CHECK(std::isinf(s.region.vertical_extent));
    CHECK(s.hyb.liveness == Liveness::Reported);
    REQUIRE(s.scripted_events.size() == 2);
    CHECK(s.scripted_events[1].time == 3);
    CHECK(s.scripted_events[1].where == Location{30, 40});
  }

  TEST_CASE("emit/parse round trip") {
    Scenario s;
    s.sim_time = 61.25;
    s.radio.path_loss_exponent = 2.7;
    s.energy.coefficients.amp = 1.3e-10;
    s.scripted_events = {{0.1, {1, 2}}};
    s.hyb.liveness = Liveness::Reported;
    const Scenario back = parse_scenario(emit_scenario(s));
    CHECK(emit_scenario(back) == emit_scenario(s));
    CHECK(back.radio.path_loss_exponent == 2.7);
    CHECK(back.energy.coefficients.amp == 1.3e-10);
  }

  TEST_CASE("parse errors name the line") {
    const auto line_of = [](const char* text) -> std::size_t {
      try {
        parse_scenario(text);
      } catch (const ParseError& e) {
        return e.line();
      }
      return 0;
    };
    CHECK(line_of("node_count = 3\nbogus = 1\n") == 2);
    CHECK(line_of("node_count = -3\n") == 1);
    CHECK(line_of("\n\nprotocol = olsr\n") == 3);
    CHECK(line_of("just words\n") == 1);
    CHECK(line_of("bs_location = 1;2\n") == 1);
  }

  TEST_CASE("validation rejects impossible scenarios") {
    Scenario s;
    s.node_count = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = Scenario{};
    s.sim_time = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = Scenario{};
    s.bs_location = {3000, 0};
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = Scenario{};
    s.radio.bandwidth = -1;
    CHECK_THROWS_AS(s.validate(), ConfigError);
  }

  TEST_CASE("generate_events: CBR count, order and ids") {
    Scenario s;
    s.sim_time = 60;
    Rng rng(1, "traffic");
    const auto events = generate_events(s, rng);
    CHECK(events.size() == 480);
    for (std::size_t i = 0; i < events.size(); ++i) {
      CHECK(events[i].id == i + 1);
      CHECK(events[i].time == doctest::Approx(i / 8.0));
      CHECK(events[i].where.x >= 0);
      CHECK(events[i].where.x <= 2000);
    }
    s.traffic.rate = 0;
    s.scripted_events = {{2.0, {1, 1}}, {1.0, {2, 2}}};
    Rng rng2(1, "traffic");
    const auto scripted = generate_events(s, rng2);
    REQUIRE(scripted.size() == 2);
    CHECK(scripted[0].time == 1.0);
    CHECK(scripted[0].id == 1);
  }

  TEST_CASE("sensing_nodes: point-in-circle on a fixed layout") {
    LocationTable t;
    t.add(0, {100, 100});
    t.add(1, {300, 100});
    t.add(2, {100, 300});
    t.add(3, {300, 300});
    t.add(4, {900, 900});
    const std::vector<NodeId> all{0, 1, 2, 3, 4};
    CHECK(sensing_nodes({200, 200}, 250, t, all) == std::vector<NodeId>{0, 1, 2, 3});
    CHECK(sensing_nodes({200, 200}, 250, t, {0, 2, 4}) == std::vector<NodeId>{0, 2});
    CHECK(sensing_nodes({100, 100}, 0, t, all) == std::vector<NodeId>{0});
    CHECK(sensing_nodes({101, 100}, 0, t, all).empty());
  }

  TEST_CASE("place_nodes: seeded, bounded, or from a file") {
    Scenario s;
    s.node_count = 25;
    Rng a(7, "placement"), b(7, "placement");
    const LocationTable ta = place_nodes(s, a);
    CHECK(ta == place_nodes(s, b));
    CHECK(ta.size() == 25);
    for (const auto& [id, loc] : ta.entries()) {
      CHECK(loc.x >= 0);
      CHECK(loc.x <= 2000);
      CHECK(loc.y >= 0);
      CHECK(loc.y <= 2000);
    }

    const auto dir = std::filesystem::temp_directory_path() / "wsnsim_scenario_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "six.csv") << "0 , 58 , 258\n1 , 160 , 275\n2 , 163 , 192\n"
                                      "3 , 216 , 202\n4 , 205 , 166\n5 , 167 , 227\n";
    std::ofstream(dir / "six.scn") << "placement = six.csv\n";
    const Scenario from_file = load_scenario(dir / "six.scn");
    Rng c(1, "placement");
    const LocationTable six = place_nodes(from_file, c);
    CHECK(six.size() == 6);
    CHECK(six.at(3) == Location{216, 202});
  }

  TEST_CASE("rng streams are independent and reproducible") {
    Rng a(1, "placement"), b(1, "placement"), c(1, "traffic"), d(2, "placement");
    const auto x = a.next();
    CHECK(x == b.next());
    CHECK(x != c.next());
    CHECK(x != d.next());
    Rng u(9, "u");
    for (int i = 0; i < 1000; ++i) {
      const double v = u.uniform();
      CHECK(v >= 0.0);
      CHECK(v < 1.0);
    }
  }

  TEST_CASE("event queue pops in (time, seq) order and refuses the past") {
    EventQueue q;
    q.push(2.0, EventKind::Timeout, 0, 1);
    q.push(1.0, EventKind::Timeout, 0, 2);
    q.push(1.0, EventKind::Timeout, 0, 3);
    CHECK(q.pop().ref == 2);
    CHECK(q.pop().ref == 3);
    CHECK(q.now() == 1.0);
    CHECK_THROWS_AS(q.push(0.5, EventKind::Timeout), std::logic_error);
    CHECK(q.pop().ref == 1);
    CHECK(q.empty());
  }
}
