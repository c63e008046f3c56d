#include <gtest/gtest.h>

#include "wsnkm/crypto.hpp"
#include "wsnkm/trust_center.hpp"

using namespace wsnkm;

namespace {

template <typename F>
ErrorKind error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no exception";
  return ErrorKind::io;
}

TrustCenter make_tc(std::size_t n, Rng& rng) {
  return TrustCenter::init(n, 300, TrustCenter::uniform_schedule(n, 0, 900), rng, GroupParams::default_toy());
}

}  // namespace

TEST(TrustCenter, RejectsBadSchedules) {
  Rng rng(1);
  auto toy = GroupParams::default_toy();
  EXPECT_EQ(error_of([&] { TrustCenter::init(0, 300, {0}, rng, toy); }), ErrorKind::invalid_length);
  EXPECT_EQ(error_of([&] { TrustCenter::init(2, 300, {0, 900}, rng, toy); }), ErrorKind::invalid_schedule);
  EXPECT_EQ(error_of([&] { TrustCenter::init(2, 300, {0, 900, 1200}, rng, toy); }), ErrorKind::invalid_schedule);
  EXPECT_EQ(error_of([&] { TrustCenter::init(1, 0, {0, 900}, rng, toy); }), ErrorKind::invalid_schedule);
  EXPECT_EQ(error_of([&] { TrustCenter::init(kMaxCycle + 1, 300, TrustCenter::uniform_schedule(kMaxCycle + 1, 0, 900), rng, toy); }),
            ErrorKind::codec_range);
}

TEST(TrustCenter, DeltaFollowsSchedule) {
  Rng rng(2);
  auto tc = TrustCenter::init(3, 300, {0, 900, 1500, 2700}, rng, GroupParams::default_toy());
  EXPECT_EQ(tc.delta(1), 900u);
  EXPECT_EQ(tc.delta(2), 600u);
  EXPECT_EQ(tc.delta(3), 1200u);
  EXPECT_TRUE(tc.auth_chain().verify());
  EXPECT_TRUE(tc.ds_chain().verify());
}

TEST(TrustCenter, OneTimeSignaturesAreMacsUnderTheDsChain) {
  Rng rng(3);
  auto tc = make_tc(4, rng);
  auto c = tc.provision_node(9, 4, rng);
  ASSERT_EQ(c.lifetime(), 4u);
  for (std::size_t i = 1; i <= 4; ++i) {
    EXPECT_EQ(c.signatures[i - 1], crypto::mac(tc.ds_chain().link(i), c.keypair.public_key));
  }
  EXPECT_EQ(c.auth_commitment, tc.auth_chain().commitment());
  EXPECT_EQ(error_of([&] { tc.provision_node(1, 5, rng); }), ErrorKind::insufficient_chain);
}

TEST(TrustCenter, CycleMessagesCarryTheNextAnchor) {
  Rng rng(4);
  const std::size_t n = 6;
  auto tc = make_tc(n, rng);
  auto c = tc.provision_node(0, n - 1, rng);
  Digest expected = c.anchor0;
  for (std::size_t i = 1; i < n; ++i) {
    auto m = tc.build_cycle_message(i, Variant::iba);
    EXPECT_EQ(m.cycle, i);
    EXPECT_EQ(crypto::hash(m.part1), expected) << "cycle " << i;
    auto body = open_cycle_body(tc.auth_chain().link(i), m.part1);
    EXPECT_TRUE(body.padding_ok);
    EXPECT_EQ(body.k_ds, tc.ds_chain().link(i));
    EXPECT_EQ(body.delta_s, 900);
    auto next = open_anchor_body(tc.auth_chain().link(i), m.part2);
    EXPECT_TRUE(next.padding_ok);
    expected = next.next_anchor;
  }
  EXPECT_EQ(tc.current_cycle(), n - 1);
  EXPECT_EQ(error_of([&] { tc.peek_cycle_message(n, Variant::iba); }), ErrorKind::chain_exhausted);
  EXPECT_NO_THROW(tc.peek_cycle_message(n, Variant::ba));
  EXPECT_EQ(error_of([&] { tc.peek_cycle_message(0, Variant::ba); }), ErrorKind::chain_exhausted);
}

TEST(TrustCenter, DisclosureWaitsForTheDelay) {
  Rng rng(5);
  auto tc = make_tc(2, rng);
  EXPECT_EQ(error_of([&] { tc.build_disclosure(1, 900 + 299.9); }), ErrorKind::too_early);
  auto d = tc.build_disclosure(1, 1200);
  EXPECT_EQ(d.cycle, 1);
  EXPECT_EQ(d.key, tc.auth_chain().link(1));
  EXPECT_EQ(crypto::derive_link(d.key), tc.auth_chain().commitment());
  EXPECT_EQ(error_of([&] { tc.build_disclosure(3, 1e9); }), ErrorKind::chain_exhausted);
}

TEST(TrustCenter, RevocationIsTaggedWithThatCyclesKey) {
  Rng rng(6);
  auto tc = make_tc(2, rng);
  auto r = tc.build_revocation(2, {4, 5});
  EXPECT_EQ(r.tag, crypto::mac(tc.auth_chain().link(2), r.signed_body()));
  EXPECT_NE(r.tag, crypto::mac(tc.auth_chain().link(1), r.signed_body()));
}
