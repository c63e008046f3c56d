#include <gtest/gtest.h>

#include <random>

#include "wsnkm/crypto.hpp"

using namespace wsnkm;
using namespace wsnkm::crypto;

namespace {

Bytes text(std::string_view s) { return Bytes(s.begin(), s.end()); }

SymKey key_of(std::uint8_t start) {
  SymKey k;
  for (std::size_t i = 0; i < kKeyOctets; ++i) k.bytes[i] = static_cast<std::uint8_t>(start + i);
  return k;
}

}  // namespace

// Vectors computed with Python hashlib / hmac / cryptography.
TEST(Crypto, Sha1KnownAnswers) {
  EXPECT_EQ(to_hex(hash({})), "da39a3ee5e6b4b0d3255bfef95601890afd80709");
  EXPECT_EQ(to_hex(hash(text("abc"))), "a9993e364706816aba3e25717850c26c9cd0d89d");
}

TEST(Crypto, HmacIsTruncatedTo16Octets) {
  EXPECT_EQ(to_hex(mac(SymKey{}, text("P_u"))), "6c780c3ef340ecbd94d1e4169fb27021");
}

TEST(Crypto, AesCbcZeroIvKnownAnswer) {
  Bytes ct = encrypt(SymKey{}, Bytes(32, 0));
  EXPECT_EQ(to_hex(ct), "66e94bd4ef8a2c3b884cfa59ca342b2ef795bd4a52e29ed713d313fa20e98dbc");
}

TEST(Crypto, ChainStepIsTruncatedSha1) {
  EXPECT_EQ(to_hex(derive_link(SymKey{})), "e129f27c5103bc5cc44bcdf0a15e160d");
}

TEST(Crypto, PairwiseKeyAndAckVectors) {
  EXPECT_EQ(to_hex(kdf_pairwise(Bytes{1, 2, 3}, 5)), "19f3d040675ef99b687f7a190dc5821a");
  EXPECT_EQ(to_hex(ack_token(key_of(0), 3, 7)), "d1c186215a6c232e03f4c7820922f1e3");
}

TEST(Crypto, AckIsDirectional) {
  SymKey k = key_of(9);
  MacTag t = ack_token(k, 3, 7);
  EXPECT_TRUE(verify_ack(k, 3, 7, t));
  EXPECT_FALSE(verify_ack(k, 7, 3, t));
  EXPECT_FALSE(verify_ack(key_of(10), 3, 7, t));
}

TEST(Crypto, KdfSeparatesCycles) {
  Bytes shared{0xAA, 0xBB};
  EXPECT_NE(kdf_pairwise(shared, 1), kdf_pairwise(shared, 2));
}

TEST(Crypto, CipherRejectsUnalignedInput) {
  EXPECT_THROW(
      {
        try {
          encrypt(SymKey{}, Bytes(15, 0));
        } catch (const Error& e) {
          EXPECT_EQ(e.kind(), ErrorKind::invalid_length);
          throw;
        }
      },
      Error);
  EXPECT_THROW(encrypt(SymKey{}, Bytes{}), Error);
  try {
    decrypt(SymKey{}, Bytes(17, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::malformed_ciphertext);
  }
}

TEST(Crypto, PadToBlock) {
  EXPECT_EQ(pad_to_block({}).size(), 16u);
  EXPECT_EQ(pad_to_block(Bytes(16, 1)).size(), 16u);
  Bytes p = pad_to_block(Bytes(17, 1));
  ASSERT_EQ(p.size(), 32u);
  EXPECT_EQ(p[16], 1);
  EXPECT_EQ(p[17], 0);
}

TEST(Crypto, DecryptInvertsEncryptForRandomInputs) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> octet(0, 255);
  for (int trial = 0; trial < 200; ++trial) {
    SymKey k;
    for (auto& b : k.bytes) b = static_cast<std::uint8_t>(octet(rng));
    Bytes plain(16 * (1 + trial % 4));
    for (auto& b : plain) b = static_cast<std::uint8_t>(octet(rng));
    Bytes ct = encrypt(k, plain);
    EXPECT_EQ(ct.size(), plain.size());
    EXPECT_EQ(decrypt(k, ct), plain);
  }
}

TEST(Crypto, KeyChainCommitmentMatchesIteratedHash) {
  // three truncated-SHA-1 steps from the zero seed, computed offline
  KeyChain c = KeyChain::generate(SymKey{}, 3);
  EXPECT_EQ(c.length(), 3u);
  EXPECT_EQ(to_hex(c.commitment()), "e15bc48a25d533ba6c8e8ea14f9d8fe6");
  EXPECT_EQ(c.link(3), SymKey{});
  EXPECT_TRUE(c.verify());
}

TEST(Crypto, KeyChainEveryLinkHashesToItsPredecessor) {
  KeyChain c = KeyChain::generate(key_of(1), 50);
  for (std::size_t i = 1; i <= c.length(); ++i) {
    // walk back from link i to the commitment by brute force
    SymKey cur = c.link(i);
    for (std::size_t s = 0; s < i; ++s) cur = derive_link(cur);
    EXPECT_EQ(cur, c.commitment());
  }
  EXPECT_EQ(c.count_valid_links(), 50u);
}

TEST(Crypto, KeyChainRejectsZeroLength) {
  EXPECT_THROW(KeyChain::generate(SymKey{}, 0), Error);
}

TEST(Crypto, ChainDistance) {
  KeyChain c = KeyChain::generate(key_of(4), 10);
  EXPECT_EQ(chain_distance(c.link(7), c.link(3), 8), 4u);
  EXPECT_EQ(chain_distance(c.link(7), c.link(3), 3), 0u);
  EXPECT_EQ(chain_distance(c.link(3), c.link(7), 10), 0u);  // wrong direction
  EXPECT_EQ(chain_distance(key_of(99), c.link(0), 10), 0u);
}
