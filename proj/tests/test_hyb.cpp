#include <doctest.h>

#include "wsnsim/hyb.hpp"
#include "wsnsim/rng.hpp"

using namespace wsnsim;
using namespace wsnsim::hyb;

namespace {

// BS at the origin; node 1 sits 600 m out with three candidates 5, 69, 43
// between it and the BS, all within 350 m of node 1.
struct Fixture {
  LocationTable locs{Location{0, 0}};
  std::set<NodeId> dead;
  HybContext ctx;
  HybNodeState node;

  Fixture() {
    locs.add(1, {0, 600});
    locs.add(5, {0, 300});
    locs.add(69, {50, 320});
    locs.add(43, {-80, 340});
    locs.add(2, {0, 100});
    locs.add(7, {0, 1000});  // far from node 1
    ctx.bs = {0, 0};
    ctx.locations = &locs;
    ctx.alive = [this](NodeId v) { return dead.count(v) == 0; };
    node.id = 1;
    node.location = locs.at(1);
    node.row = NeighbourRow::of({5, 69, 43});
  }

  HybNodeState at(NodeId id) const {
    HybNodeState s;
    s.id = id;
    s.location = locs.at(id);
    s.row = NeighbourRow::direct();
    return s;
  }
};

DataPacket packet_from(NodeId origin, EventId event = 1, double now = 0.0) {
  return DataPacket::make(1, event, origin, 4096, now);
}

}  // namespace

TEST_SUITE("hyb") {
  TEST_CASE("DedupBuffer honours the TTL") {
    DedupBuffer d(5.0);
    CHECK_FALSE(d.contains(3, 0.0));
    d.record(3, 0.0);
    CHECK(d.contains(3, 4.9));
    CHECK(d.contains(3, 5.0));
    CHECK_FALSE(d.contains(3, 5.1));
    d.record(4, 6.0);
    CHECK(d.size() == 1);
  }

  TEST_CASE("on_sense: asleep node drops without routing") {
    Fixture f;
    f.node.energy.drain_to(0);
    CHECK(on_sense(f.node, 1, 0.0, f.ctx) == Action::drop(DropReason::Asleep));
    CHECK(f.node.dedup.size() == 0);
  }

  TEST_CASE("on_sense: node within range of the BS sends direct") {
    Fixture f;
    HybNodeState s = f.at(2);
    CHECK(on_sense(s, 1, 0.0, f.ctx) == Action::send_direct());
  }

  TEST_CASE("on_sense: node beyond range forwards to the first candidate") {
    Fixture f;
    CHECK(on_sense(f.node, 1, 0.0, f.ctx) == Action::forward(5));
  }

  TEST_CASE("on_sense: repeated event is a duplicate") {
    Fixture f;
    on_sense(f.node, 1, 0.0, f.ctx);
    CHECK(on_sense(f.node, 1, 1.0, f.ctx) == Action::drop(DropReason::Duplicate));
    CHECK(on_sense(f.node, 1, 6.0, f.ctx) == Action::forward(5));
  }

  TEST_CASE("on_receive: appends self and suppresses a second copy") {
    Fixture f;
    HybNodeState relay = f.at(5);
    DataPacket p = packet_from(1);
    CHECK(on_receive(relay, p, 0.1, f.ctx) == Action::send_direct());
    CHECK(p.visited == std::vector<NodeId>{1, 5});
    CHECK(p.hops == 1);

    DataPacket copy = packet_from(69);
    CHECK(on_receive(relay, copy, 0.2, f.ctx) == Action::drop(DropReason::Duplicate));
    CHECK(copy.visited == std::vector<NodeId>{69});
  }

  TEST_CASE("on_receive: all candidates visited means no route") {
    Fixture f;
    HybNodeState relay = f.at(7);
    relay.row = NeighbourRow::of({1});
    DataPacket p = packet_from(1);
    CHECK(on_receive(relay, p, 0.0, f.ctx) == Action::drop(DropReason::NoRoute));
  }

  TEST_CASE("on_receive: asleep relay") {
    Fixture f;
    HybNodeState relay = f.at(5);
    relay.energy.drain_to(0);
    DataPacket p = packet_from(1);
    CHECK(on_receive(relay, p, 0.0, f.ctx) == Action::drop(DropReason::Asleep));
  }

  TEST_CASE("single_hop_feasible") {
    Fixture f;
    HybNodeState s = f.at(2);

    s.location = f.ctx.bs;
    CHECK(single_hop_feasible(s, f.ctx, 4096));

    s.location = {0, 350};
    CHECK(single_hop_feasible(s, f.ctx, 4096));
    s.location = {0, 351};
    CHECK_FALSE(single_hop_feasible(s, f.ctx, 4096));

    // tx_energy(4096, 200) = 2.048e-4 + 1.6384e-2 = 0.0165888 J
    s.location = {0, 200};
    s.energy.drain_to(0.01);
    CHECK(s.energy.alive());
    CHECK_FALSE(single_hop_feasible(s, f.ctx, 4096));
    s.energy = EnergyState{};
    s.energy.drain_to(0.0165888 + 1.0e-6);
    CHECK(single_hop_feasible(s, f.ctx, 4096));
    s.energy = EnergyState{};
    s.energy.drain_to(0.0165888 + 0.5e-6);
    CHECK_FALSE(single_hop_feasible(s, f.ctx, 4096));
  }

  TEST_CASE("best_neighbour") {
    Fixture f;
    const DataPacket p = packet_from(1);

    SUBCASE("least use count, earliest position among ties") {
      f.node.use_count = {{5, 2}, {69, 1}, {43, 1}};
      CHECK(best_neighbour(f.node, p, f.ctx) == NodeId{69});
    }
    SUBCASE("one feasible candidate") {
      f.dead = {5, 43};
      CHECK(best_neighbour(f.node, p, f.ctx) == NodeId{69});
    }
    SUBCASE("all candidates dead") {
      f.dead = {5, 69, 43};
      CHECK_FALSE(best_neighbour(f.node, p, f.ctx).has_value());
    }
    SUBCASE("visited and excluded candidates are skipped") {
      DataPacket q = p;
      q.append_hop(5);
      CHECK(best_neighbour(f.node, q, f.ctx, {69}) == NodeId{43});
    }
    SUBCASE("an out-of-range row entry is skipped") {
      f.node.row = NeighbourRow::of({2, 5});
      CHECK(best_neighbour(f.node, p, f.ctx) == NodeId{5});
    }
    SUBCASE("direct and isolated rows have no candidates") {
      f.node.row = NeighbourRow::isolated();
      CHECK_FALSE(best_neighbour(f.node, p, f.ctx).has_value());
    }
  }

  TEST_CASE("best_neighbour is an argmin of use counts over feasible candidates") {
    Fixture f;
    Rng rng(5, "argmin-test");
    const std::vector<NodeId> row{5, 69, 43};
    for (int i = 0; i < 500; ++i) {
      f.node.use_count.clear();
      for (NodeId v : row) f.node.use_count[v] = rng.next() % 4;
      f.dead.clear();
      for (NodeId v : row) {
        if (rng.uniform() < 0.3) f.dead.insert(v);
      }
      const auto got = best_neighbour(f.node, packet_from(1), f.ctx);
      std::optional<NodeId> expected;
      for (NodeId v : row) {
        if (f.dead.count(v)) continue;
        if (!expected || f.node.use_count[v] < f.node.use_count[*expected]) expected = v;
      }
      CHECK(got == expected);
    }
  }

  TEST_CASE("on_busy_channel") {
    Fixture f;
    const DataPacket p = packet_from(1, 1, 0.0);
    CHECK(on_busy_channel(f.node, p, {5}, 0.01, f.ctx) == Action::forward(69));
    CHECK(on_busy_channel(f.node, p, {5}, 0.1, f.ctx) == Action::drop(DropReason::Congestion));
    CHECK(on_busy_channel(f.node, p, {5, 69, 43}, 0.01, f.ctx) == Action::drop(DropReason::NoRoute));
    f.dead = {69};
    CHECK(on_busy_channel(f.node, p, {5}, 0.01, f.ctx) == Action::forward(43));
  }

  TEST_CASE("use counts: note_forward, apply_row and round-robin balance") {
    Fixture f;
    for (int i = 0; i < 100; ++i) {
      DataPacket p = packet_from(1, static_cast<EventId>(i + 1));
      const auto v = best_neighbour(f.node, p, f.ctx);
      REQUIRE(v);
      note_forward(f.node, *v);
      std::uint64_t lo = UINT64_MAX, hi = 0;
      for (NodeId n : f.node.row.neighbours) {
        lo = std::min(lo, f.node.use_count[n]);
        hi = std::max(hi, f.node.use_count[n]);
      }
      CHECK(hi - lo <= 1);
    }
    note_forward(f.node, 999);
    CHECK(f.node.use_count.count(999) == 0);

    apply_row(f.node, NeighbourRow::of({69}));
    CHECK(f.node.use_count.size() == 1);
    CHECK(f.node.use_count.count(69) == 1);
  }

  TEST_CASE("report_residual passes the residual through") {
    Fixture f;
    f.node.energy.drain_to(9.8);
    const EnergyReport r = report_residual(f.node);
    CHECK(r.node == 1);
    CHECK(r.residual == doctest::Approx(9.8));
    CHECK(r.residual_pj == f.node.energy.residual_pj());
  }
}
