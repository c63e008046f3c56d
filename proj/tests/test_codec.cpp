#include <gtest/gtest.h>

#include <filesystem>

#include "wsnkm/codec.hpp"
#include "wsnkm/crypto.hpp"

using namespace wsnkm;

namespace {

SymKey key_of(std::uint8_t v) {
  SymKey k;
  k.bytes.fill(v);
  return k;
}

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

}  // namespace

TEST(Codec, CounterDeltaBitLayout) {
  // 10-bit counter in the high bits, 14-bit delta in the low bits
  auto p = pack_counter_delta(1, 900);
  EXPECT_EQ(p[0], 0x00);
  EXPECT_EQ(p[1], 0x43);
  EXPECT_EQ(p[2], 0x84);
  auto top = pack_counter_delta(kMaxCycle, kMaxDelta);
  EXPECT_EQ(top[0], 0xFF);
  EXPECT_EQ(top[1], 0xFF);
  EXPECT_EQ(top[2], 0xFF);
  auto [c, d] = unpack_counter_delta(ByteView(p.data(), 3));
  EXPECT_EQ(c, 1);
  EXPECT_EQ(d, 900);
}

TEST(Codec, CounterDeltaRange) {
  EXPECT_EQ(error_of([] { pack_counter_delta(kMaxCycle + 1, 0); }), ErrorKind::codec_range);
  EXPECT_EQ(error_of([] { pack_counter_delta(0, kMaxDelta + 1); }), ErrorKind::codec_range);
}

TEST(Codec, CounterDeltaAllCountersSurvive) {
  for (CycleIndex c = 0; c <= kMaxCycle; ++c) {
    auto p = pack_counter_delta(c, (c * 37u) % (kMaxDelta + 1));
    auto [c2, d2] = unpack_counter_delta(ByteView(p.data(), 3));
    ASSERT_EQ(c2, c);
    ASSERT_EQ(d2, (c * 37u) % (kMaxDelta + 1));
  }
}

TEST(Codec, WireSizes) {
  Ticket t{3, Bytes(21, 2), {}};
  EXPECT_EQ(t.encode().size(), 39u);
  CycleMessage ba{Variant::ba, Bytes(32, 1), {}, 0};
  EXPECT_EQ(ba.encode().size(), 32u);
  EXPECT_EQ(ba.wire_octets(), 32u);
  CycleMessage iba{Variant::iba, Bytes(32, 1), Bytes(32, 2), 4};
  EXPECT_EQ(iba.encode().size(), 66u);
  EXPECT_EQ(iba.wire_octets(), 66u);
  EXPECT_EQ((DisclosureMessage{1, {}}.encode().size()), 18u);
  EXPECT_EQ((AckMessage{1, {}}.encode().size()), 18u);
}

TEST(Codec, DecodeRejectsWrongLengths) {
  EXPECT_EQ(error_of([] { Ticket::decode(Bytes(38), 21); }), ErrorKind::invalid_length);
  EXPECT_EQ(error_of([] { CycleMessage::decode(Variant::ba, Bytes(33)); }), ErrorKind::invalid_length);
  EXPECT_EQ(error_of([] { CycleMessage::decode(Variant::iba, Bytes(64)); }), ErrorKind::invalid_length);
  EXPECT_EQ(error_of([] { DisclosureMessage::decode(Bytes(17)); }), ErrorKind::invalid_length);
  EXPECT_EQ(error_of([] { AckMessage::decode(Bytes(19)); }), ErrorKind::invalid_length);
  EXPECT_EQ(error_of([] { RevocationMessage::decode(Bytes(5)); }), ErrorKind::invalid_length);
}

TEST(Codec, IbaMessageFieldsDecode) {
  CycleMessage m{Variant::iba, Bytes(32, 1), Bytes(32, 2), 513};
  auto d = CycleMessage::decode(Variant::iba, m.encode());
  EXPECT_EQ(d.part1, m.part1);
  EXPECT_EQ(d.part2, m.part2);
  EXPECT_EQ(d.cycle, 513);
}

TEST(Codec, SealedCycleBodyLayout) {
  SymKey k_auth = key_of(1), k_ds = key_of(2);
  Bytes ct = seal_cycle_body(k_auth, k_ds, 7, 900);
  ASSERT_EQ(ct.size(), 32u);
  Bytes plain = crypto::decrypt(k_auth, ct);
  EXPECT_TRUE(std::equal(k_ds.begin(), k_ds.end(), plain.begin()));
  auto cd = pack_counter_delta(7, 900);
  EXPECT_TRUE(std::equal(cd.begin(), cd.end(), plain.begin() + 16));
  EXPECT_TRUE(std::all_of(plain.begin() + 19, plain.end(), [](auto b) { return b == 0; }));

  auto body = open_cycle_body(k_auth, ct);
  EXPECT_TRUE(body.padding_ok);
  EXPECT_EQ(body.k_ds, k_ds);
  EXPECT_EQ(body.cycle, 7);
  EXPECT_EQ(body.delta_s, 900);
}

TEST(Codec, WrongKeyBreaksPadding) {
  Bytes ct = seal_cycle_body(key_of(1), key_of(2), 7, 900);
  EXPECT_FALSE(open_cycle_body(key_of(3), ct).padding_ok);
  Digest mu;
  mu.bytes.fill(9);
  Bytes a = seal_anchor_body(key_of(1), mu, 4);
  auto good = open_anchor_body(key_of(1), a);
  EXPECT_TRUE(good.padding_ok);
  EXPECT_EQ(good.next_anchor, mu);
  EXPECT_EQ(good.cycle, 4);
  EXPECT_FALSE(open_anchor_body(key_of(3), a).padding_ok);
}

TEST(Codec, RevocationList) {
  RevocationMessage r{5, {}, {}};
  for (NodeId i = 0; i < 16; ++i) r.ids.push_back(static_cast<NodeId>(100 + i));
  EXPECT_EQ(r.ids.size() * 2, 32u);  // sixteen ids fill one payload fragment
  auto d = RevocationMessage::decode(r.encode());
  EXPECT_EQ(d.cycle, 5);
  EXPECT_EQ(d.ids, r.ids);
  r.ids.resize(256);
  EXPECT_EQ(error_of([&] { r.encode(); }), ErrorKind::codec_range);
}

TEST(Codec, CredentialFile) {
  NodeCredentials c;
  c.id = 12;
  c.group = GroupParams::toy(101, 2);
  c.keypair = {Bytes{32}, Bytes{5}};
  c.signatures.resize(3);
  c.signatures[1].bytes.fill(7);
  c.anchor0.bytes.fill(8);
  c.auth_commitment = key_of(4);
  auto path = std::filesystem::temp_directory_path() / "wsnkm_cred_test.bin";
  write_credentials(path, c);
  auto d = read_credentials(path);
  std::filesystem::remove(path);
  EXPECT_EQ(d.id, 12);
  EXPECT_EQ(d.group.order, c.group.order);
  EXPECT_EQ(d.keypair.public_key, c.keypair.public_key);
  EXPECT_EQ(d.lifetime(), 3u);
  EXPECT_EQ(d.signatures[1], c.signatures[1]);
  EXPECT_EQ(d.anchor0, c.anchor0);
  EXPECT_EQ(d.auth_commitment, c.auth_commitment);

  Bytes raw = encode_credentials(c);
  raw[0] = 'X';
  EXPECT_EQ(error_of([&] { decode_credentials(raw); }), ErrorKind::parse);
  Bytes truncated = encode_credentials(c);
  truncated.pop_back();
  EXPECT_EQ(error_of([&] { decode_credentials(truncated); }), ErrorKind::parse);
  EXPECT_EQ(error_of([] { read_credentials("/nonexistent/cred.bin"); }), ErrorKind::io);
}

TEST(Codec, VariantNames) {
  EXPECT_EQ(parse_variant("ba"), Variant::ba);
  EXPECT_EQ(parse_variant("iba"), Variant::iba);
  EXPECT_EQ(error_of([] { parse_variant("tesla"); }), ErrorKind::parse);
}
