#include "wsnkm/codec.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include "wsnkm/crypto.hpp"

namespace wsnkm {

std::string_view to_string(Variant v) { return v == Variant::ba ? "ba" : "iba"; }

Variant parse_variant(std::string_view name) {
  if (name == "ba" || name == "BA") return Variant::ba;
  if (name == "iba" || name == "iBA" || name == "i-ba") return Variant::iba;
  throw Error(ErrorKind::parse, "unknown protocol variant: " + std::string(name));
}

std::array<std::uint8_t, 3> pack_counter_delta(CycleIndex cycle, std::uint32_t delta_s) {
  if (cycle > kMaxCycle) throw Error(ErrorKind::codec_range, "cycle counter exceeds 10 bits");
  if (delta_s > kMaxDelta) throw Error(ErrorKind::codec_range, "delta exceeds 14 bits");
  std::uint32_t packed = (static_cast<std::uint32_t>(cycle) << 14) | delta_s;
  return {static_cast<std::uint8_t>(packed >> 16), static_cast<std::uint8_t>(packed >> 8),
          static_cast<std::uint8_t>(packed)};
}

std::pair<CycleIndex, std::uint16_t> unpack_counter_delta(ByteView three) {
  std::uint32_t packed = (static_cast<std::uint32_t>(three[0]) << 16) |
                         (static_cast<std::uint32_t>(three[1]) << 8) | three[2];
  return {static_cast<CycleIndex>(packed >> 14), static_cast<std::uint16_t>(packed & kMaxDelta)};
}

namespace {

void require_size(ByteView wire, std::size_t n, const char* what) {
  if (wire.size() != n) throw Error(ErrorKind::invalid_length, std::string("bad ") + what + " length");
}

template <std::size_t N>
void copy_into(FixedOctets<N>& dst, ByteView src) {
  std::copy_n(src.begin(), N, dst.bytes.begin());
}

bool all_zero(ByteView v) {
  return std::all_of(v.begin(), v.end(), [](std::uint8_t b) { return b == 0; });
}

}  // namespace

Bytes Ticket::encode() const {
  Bytes out;
  append_u16(out, cycle);
  append(out, public_key);
  append(out, signature.view());
  return out;
}

Ticket Ticket::decode(ByteView wire, std::size_t public_octets) {
  require_size(wire, 2 + public_octets + kTagOctets, "ticket");
  Ticket t;
  t.cycle = read_u16(wire, 0);
  t.public_key.assign(wire.begin() + 2, wire.begin() + 2 + static_cast<std::ptrdiff_t>(public_octets));
  copy_into(t.signature, wire.subspan(2 + public_octets));
  return t;
}

Bytes CycleMessage::encode() const {
  Bytes out = part1;
  if (variant == Variant::iba) {
    append(out, part2);
    append_u16(out, cycle);
  }
  return out;
}

CycleMessage CycleMessage::decode(Variant variant, ByteView wire) {
  CycleMessage m;
  m.variant = variant;
  if (variant == Variant::ba) {
    require_size(wire, kCipherOctets, "BA cycle message");
    m.part1.assign(wire.begin(), wire.end());
    return m;
  }
  require_size(wire, 2 * kCipherOctets + 2, "iBA cycle message");
  m.part1.assign(wire.begin(), wire.begin() + kCipherOctets);
  m.part2.assign(wire.begin() + kCipherOctets, wire.begin() + 2 * kCipherOctets);
  m.cycle = read_u16(wire, 2 * kCipherOctets);
  return m;
}

std::size_t CycleMessage::wire_octets() const {
  return variant == Variant::ba ? part1.size() : part1.size() + part2.size() + 2;
}

Bytes seal_cycle_body(const SymKey& k_auth, const SymKey& k_ds, CycleIndex cycle, std::uint32_t delta_s) {
  Bytes plain(k_ds.begin(), k_ds.end());
  auto cd = pack_counter_delta(cycle, delta_s);
  plain.insert(plain.end(), cd.begin(), cd.end());
  return crypto::encrypt(k_auth, crypto::pad_to_block(plain));
}

CycleBody open_cycle_body(const SymKey& k_auth, ByteView ciphertext) {
  Bytes plain = crypto::decrypt(k_auth, ciphertext);
  CycleBody body;
  if (plain.size() < kKeyOctets + 3) return body;
  copy_into(body.k_ds, plain);
  auto [cycle, delta] = unpack_counter_delta(ByteView(plain).subspan(kKeyOctets, 3));
  body.cycle = cycle;
  body.delta_s = delta;
  body.padding_ok = all_zero(ByteView(plain).subspan(kKeyOctets + 3));
  return body;
}

Bytes seal_anchor_body(const SymKey& k_auth, const Digest& next_anchor, CycleIndex cycle) {
  Bytes plain(next_anchor.begin(), next_anchor.end());
  append_u16(plain, cycle);
  return crypto::encrypt(k_auth, crypto::pad_to_block(plain));
}

AnchorBody open_anchor_body(const SymKey& k_auth, ByteView ciphertext) {
  Bytes plain = crypto::decrypt(k_auth, ciphertext);
  AnchorBody body;
  if (plain.size() < kDigestOctets + 2) return body;
  copy_into(body.next_anchor, plain);
  body.cycle = read_u16(plain, kDigestOctets);
  body.padding_ok = all_zero(ByteView(plain).subspan(kDigestOctets + 2));
  return body;
}

Bytes DisclosureMessage::encode() const {
  Bytes out;
  out.reserve(2 + kKeyOctets);
  append_u16(out, cycle);
  append(out, key.view());
  return out;
}

DisclosureMessage DisclosureMessage::decode(ByteView wire) {
  require_size(wire, 2 + kKeyOctets, "disclosure");
  DisclosureMessage d;
  d.cycle = read_u16(wire, 0);
  copy_into(d.key, wire.subspan(2));
  return d;
}

Bytes AckMessage::encode() const {
  Bytes out;
  out.reserve(2 + kTagOctets);
  append_u16(out, cycle);
  append(out, tag.view());
  return out;
}

AckMessage AckMessage::decode(ByteView wire) {
  require_size(wire, 2 + kTagOctets, "ack");
  AckMessage a;
  a.cycle = read_u16(wire, 0);
  copy_into(a.tag, wire.subspan(2));
  return a;
}

Bytes RevocationMessage::signed_body() const {
  if (ids.size() > 255) throw Error(ErrorKind::codec_range, "too many revoked ids in one message");
  Bytes out;
  append_u16(out, cycle);
  out.push_back(static_cast<std::uint8_t>(ids.size()));
  for (NodeId id : ids) append_u16(out, id);
  return out;
}

Bytes RevocationMessage::encode() const {
  Bytes out = signed_body();
  append(out, tag.view());
  return out;
}

RevocationMessage RevocationMessage::decode(ByteView wire) {
  if (wire.size() < 3 + kTagOctets) throw Error(ErrorKind::invalid_length, "short revocation");
  RevocationMessage r;
  r.cycle = read_u16(wire, 0);
  std::size_t count = wire[2];
  require_size(wire, 3 + 2 * count + kTagOctets, "revocation");
  for (std::size_t i = 0; i < count; ++i) r.ids.push_back(read_u16(wire, 3 + 2 * i));
  copy_into(r.tag, wire.subspan(3 + 2 * count));
  return r;
}

// --- credential files ------------------------------------------------------

namespace {

void put_blob(Bytes& out, ByteView blob) {
  if (blob.size() > 255) throw Error(ErrorKind::codec_range, "credential field too long");
  out.push_back(static_cast<std::uint8_t>(blob.size()));
  append(out, blob);
}

class Reader {
 public:
  explicit Reader(ByteView in) : in_(in) {}
  ByteView take(std::size_t n) {
    if (pos_ + n > in_.size()) throw Error(ErrorKind::parse, "truncated credential file");
    ByteView out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint8_t u8() { return take(1)[0]; }
  std::uint16_t u16() { return read_u16(take(2), 0); }
  Bytes blob() {
    auto v = take(u8());
    return {v.begin(), v.end()};
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  ByteView in_;
  std::size_t pos_ = 0;
};

constexpr std::uint8_t kCredentialVersion = 1;

}  // namespace

Bytes encode_credentials(const NodeCredentials& c) {
  Bytes out{'W', 'S', 'N', 'C', kCredentialVersion, static_cast<std::uint8_t>(c.group.backend)};
  append_u16(out, c.id);
  put_blob(out, c.group.order);
  put_blob(out, c.group.generator);
  put_blob(out, c.keypair.public_key);
  put_blob(out, c.keypair.private_key);
  append(out, c.anchor0.view());
  append(out, c.auth_commitment.view());
  append_u16(out, static_cast<std::uint16_t>(c.signatures.size()));
  for (const auto& s : c.signatures) append(out, s.view());
  return out;
}

NodeCredentials decode_credentials(ByteView file) {
  Reader r(file);
  auto magic = r.take(4);
  if (!std::equal(magic.begin(), magic.end(), "WSNC")) throw Error(ErrorKind::parse, "not a credential file");
  if (r.u8() != kCredentialVersion) throw Error(ErrorKind::parse, "unsupported credential version");
  NodeCredentials c;
  std::uint8_t backend = r.u8();
  if (backend != static_cast<std::uint8_t>(GroupBackend::toy) &&
      backend != static_cast<std::uint8_t>(GroupBackend::ecc160)) {
    throw Error(ErrorKind::parse, "unknown group backend in credential file");
  }
  c.group.backend = static_cast<GroupBackend>(backend);
  c.id = r.u16();
  c.group.order = r.blob();
  c.group.generator = r.blob();
  c.keypair.public_key = r.blob();
  c.keypair.private_key = r.blob();
  copy_into(c.anchor0, r.take(kDigestOctets));
  copy_into(c.auth_commitment, r.take(kKeyOctets));
  std::uint16_t m = r.u16();
  c.signatures.resize(m);
  for (auto& s : c.signatures) copy_into(s, r.take(kTagOctets));
  if (!r.done()) throw Error(ErrorKind::parse, "trailing octets in credential file");
  return c;
}

void write_credentials(const std::filesystem::path& path, const NodeCredentials& c) {
  Bytes data = encode_credentials(c);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

NodeCredentials read_credentials(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_credentials(data);
}

}  // namespace wsnkm
