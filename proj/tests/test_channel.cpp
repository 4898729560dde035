#include <doctest.h>

#include "wsnsim/channel.hpp"

using namespace wsnsim;

namespace {

// A line of nodes 300 m apart: each hears only its immediate neighbours.
Channel line_channel(int n) {
  std::map<NodeId, Location> pos;
  for (int i = 0; i < n; ++i) pos[static_cast<NodeId>(i)] = {300.0 * i, 0};
  return Channel(pos, 350);
}

const auto everyone = [](NodeId) { return true; };

}  // namespace

TEST_SUITE("channel") {
  TEST_CASE("neighbour lists and range") {
    const Channel ch = line_channel(4);
    CHECK(ch.neighbours(0) == std::vector<NodeId>{1});
    CHECK(ch.neighbours(1) == std::vector<NodeId>{0, 2});
    CHECK(ch.in_range(2, 3));
    CHECK_FALSE(ch.in_range(0, 2));
    CHECK_FALSE(ch.in_range(0, 99));
  }

  TEST_CASE("sole transmitter in an idle network is granted") {
    Channel ch = line_channel(3);
    const auto r = ch.arbitrate(0, 1, 0.0, 1.0, 1, everyone);
    CHECK(r.outcome == Arbitration::Grant);
    CHECK(r.victims.empty());
    CHECK(ch.reservations(1) == 1);
    CHECK(ch.active_count() == 1);
    ch.release(r.transmission);
    CHECK(ch.active_count() == 0);
  }

  TEST_CASE("busy: receiver hears an active frame") {
    Channel ch = line_channel(4);
    REQUIRE(ch.arbitrate(0, 1, 0.0, 1.0, 1, everyone).outcome == Arbitration::Grant);
    // 2 -> 1: the receiver is already reserved.
    CHECK(ch.arbitrate(2, 1, 0.0, 1.0, 1, everyone).outcome == Arbitration::Busy);
  }

  TEST_CASE("busy: half duplex, sleeping or unreachable receiver") {
    Channel ch = line_channel(4);
    REQUIRE(ch.arbitrate(0, 1, 0.0, 1.0, 1, everyone).outcome == Arbitration::Grant);
    CHECK(ch.arbitrate(1, 2, 0.0, 1.0, 1, everyone).outcome == Arbitration::Busy);
    Channel idle = line_channel(4);
    CHECK(idle.arbitrate(0, 2, 0.0, 1.0, 1, everyone).outcome == Arbitration::Busy);
    CHECK(idle.arbitrate(0, 1, 0.0, 1.0, 1, [](NodeId n) { return n != 1; }).outcome == Arbitration::Busy);
    CHECK(idle.active_count() == 0);
  }

  TEST_CASE("hidden terminals blind to each other collide and both are lost") {
    Channel ch = line_channel(4);
    const auto a = ch.arbitrate(0, 1, 0.0, 1.0, 1, everyone);
    REQUIRE(a.outcome == Arbitration::Grant);
    // 2 cannot hear 0, but its frame reaches 1, the receiver of 0's frame.
    const auto b = ch.arbitrate(2, 3, 0.0, 1.0, 1, everyone);
    CHECK(b.outcome == Arbitration::Collision);
    CHECK(b.victims == std::vector<std::uint64_t>{a.transmission});
    CHECK(ch.find(a.transmission)->lost);
    CHECK(ch.find(b.transmission)->lost);
  }

  TEST_CASE("deferral only sees frames admitted in earlier batches") {
    Channel ch = line_channel(3);
    const auto a = ch.arbitrate(0, 1, 0.0, 0.5, 1, everyone);
    REQUIRE(a.outcome == Arbitration::Grant);
    CHECK_FALSE(ch.busy_until(1, 1).has_value());
    CHECK(ch.busy_until(1, 2) == 0.5);
    CHECK(ch.senses_activity(0, 2));
    CHECK_FALSE(ch.senses_activity(0, 1));
    // without a NAV, a node that only hears the receiver does not defer
    CHECK_FALSE(ch.senses_activity(2, 2));
  }

  TEST_CASE("broadcast corruption is per receiver") {
    Channel ch = line_channel(5);
    // 1 broadcasts to {0, 2}; 3 then broadcasts to {2, 4} in the same instant.
    const auto a = ch.arbitrate(1, kBroadcast, 0.0, 1.0, 1, everyone);
    REQUIRE(a.outcome == Arbitration::Grant);
    const auto b = ch.arbitrate(3, kBroadcast, 0.0, 1.0, 1, everyone);
    CHECK(b.outcome == Arbitration::Collision);
    CHECK(ch.find(a.transmission)->corrupted == std::set<NodeId>{2});
    CHECK(ch.find(b.transmission)->corrupted == std::set<NodeId>{2});
    CHECK_FALSE(ch.find(a.transmission)->lost);
  }

  TEST_CASE("broadcast skips sleeping neighbours") {
    Channel ch = line_channel(3);
    const auto a = ch.arbitrate(1, kBroadcast, 0.0, 1.0, 1, [](NodeId n) { return n != 0; });
    CHECK(ch.find(a.transmission)->receivers == std::vector<NodeId>{2});
  }
}
