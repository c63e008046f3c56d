#include <gtest/gtest.h>

#include "wsnkm/dh_group.hpp"

using namespace wsnkm;

TEST(ToyGroup, SmallModulusByHand) {
  auto g = make_group(GroupParams::toy(101, 2));
  EXPECT_EQ(g->public_octets(), 1u);
  auto a = g->from_private(Bytes{5});
  EXPECT_EQ(a.public_key, Bytes{32});  // 2^5 mod 101
  auto b = g->from_private(Bytes{7});
  // (2^7)^5 mod 101 = 39
  EXPECT_EQ(g->shared(a.private_key, b.public_key), Bytes{39});
  EXPECT_EQ(g->shared(b.private_key, a.public_key), Bytes{39});
}

TEST(ToyGroup, RejectsBadParameters) {
  EXPECT_THROW(make_group(GroupParams::toy(100, 3)), Error);
  EXPECT_THROW(make_group(GroupParams::toy(101, 1)), Error);
  EXPECT_THROW(make_group(GroupParams::toy(101, 101)), Error);
}

TEST(ToyGroup, RejectsInvalidElements) {
  auto g = make_group(GroupParams::toy(101, 2));
  auto a = g->from_private(Bytes{5});
  EXPECT_FALSE(g->is_valid_public(Bytes{1}));
  EXPECT_FALSE(g->is_valid_public(Bytes{0}));
  EXPECT_FALSE(g->is_valid_public(Bytes{101}));
  EXPECT_FALSE(g->is_valid_public(Bytes{3, 4}));
  try {
    g->shared(a.private_key, Bytes{1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_point);
  }
}

TEST(ToyGroup, DefaultGroupAgreesForRandomPairs) {
  auto g = make_group(GroupParams::default_toy());
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    auto a = g->keygen(rng);
    auto b = g->keygen(rng);
    ASSERT_TRUE(g->is_valid_public(a.public_key));
    EXPECT_EQ(g->shared(a.private_key, b.public_key), g->shared(b.private_key, a.public_key));
  }
}

TEST(Ecc160, GeneratorEncodingMatchesPublishedCurve) {
  auto g = make_group(GroupParams::ecc160());
  EXPECT_EQ(g->public_octets(), 21u);
  // secp160r1 base point, compressed (y is even)
  // raw scalars are folded into [1, n-1] as k mod (n-1) + 1, so 0 selects scalar 1
  auto one = g->from_private(Bytes{0});
  EXPECT_EQ(one.private_key.back(), 1);
  EXPECT_EQ(to_hex(one.public_key), "024a96b5688ef573284664698968c38bb913cbfc82");
}

TEST(Ecc160, AgreementAndPointValidation) {
  auto g = make_group(GroupParams::ecc160());
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    auto a = g->keygen(rng);
    auto b = g->keygen(rng);
    EXPECT_EQ(g->shared(a.private_key, b.public_key), g->shared(b.private_key, a.public_key));
  }
  auto a = g->keygen(rng);
  Bytes bad = a.public_key;
  bad[0] = 0x05;  // not a point encoding
  EXPECT_FALSE(g->is_valid_public(bad));
  EXPECT_THROW(g->shared(a.private_key, bad), Error);
  EXPECT_FALSE(g->is_valid_public(Bytes(20, 1)));
}

TEST(Backend, Names) {
  EXPECT_EQ(parse_backend("toy"), GroupBackend::toy);
  EXPECT_EQ(parse_backend("ecc160"), GroupBackend::ecc160);
  EXPECT_EQ(to_string(GroupBackend::ecc160), "ecc160");
  EXPECT_THROW(parse_backend("rsa"), Error);
}
