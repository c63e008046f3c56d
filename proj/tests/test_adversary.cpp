#include <gtest/gtest.h>

#include "wsnkm/adversary.hpp"

using namespace wsnkm;

namespace {

SimConfig base(Variant v, std::uint64_t seed = 1) {
  SimConfig c;
  c.nodes = 20;
  c.side = 60;
  c.range = 30;
  c.variant = v;
  c.backend = GroupBackend::toy;
  c.seed = seed;
  return c;
}

NodeId busiest(const Simulation& sim) {
  NodeId best = 0;
  for (std::size_t v = 0; v < sim.size(); ++v) {
    if (sim.graph().neighbors(v).size() > sim.graph().neighbors(best).size()) best = static_cast<NodeId>(v);
  }
  return best;
}

}  // namespace

TEST(Tamper, FlipsExactlyOneBitMsbFirst) {
  Bytes m{0x00, 0xFF};
  EXPECT_EQ(tamper(m, 0), (Bytes{0x80, 0xFF}));
  EXPECT_EQ(tamper(m, 7), (Bytes{0x01, 0xFF}));
  EXPECT_EQ(tamper(m, 15), (Bytes{0x00, 0xFE}));
  EXPECT_THROW(tamper(m, 16), Error);
  for (std::size_t b = 0; b < 16; ++b) {
    Bytes t = tamper(m, b);
    int diff = 0;
    for (std::size_t i = 0; i < m.size(); ++i) diff += __builtin_popcount(unsigned(m[i] ^ t[i]));
    EXPECT_EQ(diff, 1);
  }
}

TEST(Bogus, FramingMatchesVariant) {
  Rng rng(1);
  auto iba = bogus_cycle_message(Variant::iba, 3, rng);
  EXPECT_EQ(iba.encode().size(), 66u);
  EXPECT_EQ(iba.cycle, 3);
  auto ba = bogus_cycle_message(Variant::ba, 3, rng);
  EXPECT_EQ(ba.encode().size(), 32u);
}

TEST(AttackPlan, ValidationAndNames) {
  AttackPlan p;
  EXPECT_NO_THROW(p.validate());
  p.tau_minutes = 1;
  EXPECT_THROW(p.validate(), Error);
  p.tau_minutes = 5;
  p.window_minutes = -1;
  EXPECT_THROW(p.validate(), Error);
  EXPECT_EQ(parse_attack("energy-flood"), AttackKind::energy_flood);
  EXPECT_EQ(to_string(AttackKind::replay_3), "replay-3");
  EXPECT_THROW(parse_attack("sybil"), Error);
}

TEST(MemoryFlood, BaBuffersIbaDoesNot) {
  AttackPlan plan;
  plan.tau_minutes = 4;  // every injection lands before the 5-minute disclosure
  plan.count = 50;
  for (Variant v : {Variant::ba, Variant::iba}) {
    Simulation sim(base(v));
    Rng rng(2);
    auto r = inject_memory_flood(sim, plan, rng);
    EXPECT_EQ(r.injected, 50u);
    EXPECT_EQ(r.series.size(), 50u);
    if (v == Variant::ba) {
      EXPECT_EQ(r.admitted, 50u);
      EXPECT_EQ(r.buffered_at_disclosure, 50u * 32u);
    } else {
      EXPECT_EQ(r.admitted, 0u);
      EXPECT_EQ(r.buffered_at_disclosure, 0u);
    }
    // honest links still come up
    auto ps = sim.pair_stats();
    EXPECT_EQ(ps.confirmed, ps.adjacent);
  }
}

TEST(MemoryFlood, BaBufferCapsAdmissions) {
  SimConfig c = base(Variant::ba);
  c.node.buffer_capacity = 640;
  Simulation sim(c);
  AttackPlan plan;
  plan.tau_minutes = 4;
  plan.count = 100;
  Rng rng(3);
  auto r = inject_memory_flood(sim, plan, rng);
  EXPECT_LE(r.buffered_at_disclosure, 640u);
  EXPECT_LT(r.admitted, 100u);
}

TEST(EnergyFlood, IbaNeverRelaysForgeries) {
  AttackPlan plan;
  plan.count = 20;
  plan.position = Point{30, 30};
  for (Variant v : {Variant::ba, Variant::iba}) {
    SimConfig c = base(v);
    c.bs_mode = BsMode::multihop;
    Simulation sim(c);
    Rng rng(4);
    auto r = inject_energy_flood(sim, plan, rng);
    EXPECT_GT(r.adversary_degree, 0u);
    if (v == Variant::iba) {
      EXPECT_EQ(r.relays, 0u);
      EXPECT_EQ(r.retransmission_mj, 0.0);
      EXPECT_LE(r.induced_mj, r.one_hop_bound_mj + 1e-9);
    } else {
      EXPECT_GT(r.relays, 0u);
      EXPECT_GT(r.induced_mj, r.one_hop_bound_mj);
    }
  }
}

TEST(Replay, AllCasesRejectedOrBenign) {
  SimConfig c = base(Variant::iba, 5);
  c.nodes = 6;
  c.side = 40;
  c.backend = GroupBackend::ecc160;
  {
    Simulation sim(c);
    auto r = replay_case_1(sim, busiest(sim));
    EXPECT_TRUE(r.passed) << r.detail;
  }
  c.cycles = 2;
  for (bool rewrite : {false, true}) {
    Simulation sim(c);
    auto r = replay_case_2(sim, busiest(sim), rewrite);
    EXPECT_TRUE(r.passed) << r.detail;
    EXPECT_EQ(r.target_keys, 0u);
  }
  c.cycles = 1;
  for (auto v : {Replay3Variant::late_tickets, Replay3Variant::delayed_message, Replay3Variant::altered_delta}) {
    Simulation sim(c);
    Rng rng(6);
    auto r = replay_case_3(sim, busiest(sim), v, rng);
    EXPECT_TRUE(r.passed) << to_string(v) << ": " << r.detail;
    EXPECT_EQ(r.adversary_keys, 0u);
    EXPECT_EQ(r.adversary_authenticated, 0u);
  }
}

TEST(Replay, CaseTwoNeedsTwoCycles) {
  Simulation sim(base(Variant::iba));
  EXPECT_THROW(replay_case_2(sim, 0), Error);
}
