#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "wsnkm/dh_group.hpp"
#include "wsnkm/types.hpp"

/// Wire formats. All integers are big-endian.
///
///   counter/delta field (3 octets): bits 23..14 cycle (10 bits), bits 13..0 delta seconds (14 bits)
///   Ticket      : cycle(2) | public(P) | signature(16)
///   BA message  : E_{K_Auth_i}(pad(K_DS_i | counter/delta))                 32 octets
///   iBA message : part1(32) | part2(32) | cycle(2)
///                 part1 = E_{K_Auth_i}(pad(K_DS_i | counter/delta))
///                 part2 = E_{K_Auth_i}(pad(mu_i | cycle(2)))
///   Disclosure  : cycle(2) | K_Auth_i(16)
///   Ack         : cycle(2) | tag(16)
///   Revocation  : cycle(2) | count(1) | ids(2 each) | tag(16)
namespace wsnkm {

inline constexpr std::uint16_t kMaxCycle = (1u << 10) - 1;
inline constexpr std::uint16_t kMaxDelta = (1u << 14) - 1;
inline constexpr std::size_t kCipherOctets = 32;

enum class Variant : std::uint8_t { ba, iba };
std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

/// Throws Error{codec_range} if cycle >= 2^10 or delta >= 2^14.
std::array<std::uint8_t, 3> pack_counter_delta(CycleIndex cycle, std::uint32_t delta_s);
std::pair<CycleIndex, std::uint16_t> unpack_counter_delta(ByteView three);

struct Ticket {
  CycleIndex cycle = 0;
  Bytes public_key;
  MacTag signature;

  Bytes encode() const;
  /// Throws Error{invalid_length}.
  static Ticket decode(ByteView wire, std::size_t public_octets);
};

struct CycleMessage {
  Variant variant = Variant::iba;
  Bytes part1;        // BA: the whole ciphertext
  Bytes part2;        // iBA only
  CycleIndex cycle = 0;  // iBA plaintext index; 0 for BA

  Bytes encode() const;
  static CycleMessage decode(Variant variant, ByteView wire);
  std::size_t wire_octets() const;
};

/// Plaintext recovered from part1 (or the BA message).
struct CycleBody {
  SymKey k_ds;
  CycleIndex cycle = 0;
  std::uint16_t delta_s = 0;
  bool padding_ok = false;
};
CycleBody open_cycle_body(const SymKey& k_auth, ByteView ciphertext);
Bytes seal_cycle_body(const SymKey& k_auth, const SymKey& k_ds, CycleIndex cycle, std::uint32_t delta_s);

struct AnchorBody {
  Digest next_anchor;
  CycleIndex cycle = 0;
  bool padding_ok = false;
};
AnchorBody open_anchor_body(const SymKey& k_auth, ByteView ciphertext);
Bytes seal_anchor_body(const SymKey& k_auth, const Digest& next_anchor, CycleIndex cycle);

struct DisclosureMessage {
  CycleIndex cycle = 0;
  SymKey key;

  Bytes encode() const;
  static DisclosureMessage decode(ByteView wire);
  friend bool operator==(const DisclosureMessage&, const DisclosureMessage&) = default;
};

struct AckMessage {
  CycleIndex cycle = 0;
  MacTag tag;

  Bytes encode() const;
  static AckMessage decode(ByteView wire);
};

struct RevocationMessage {
  CycleIndex cycle = 0;
  std::vector<NodeId> ids;
  MacTag tag;

  /// Octets covered by the tag: cycle | count | ids.
  Bytes signed_body() const;
  Bytes encode() const;
  static RevocationMessage decode(ByteView wire);
};

/// Material preloaded into a node before deployment.
struct NodeCredentials {
  NodeId id = 0;
  GroupParams group;
  DhKeyPair keypair;
  std::vector<MacTag> signatures;  // signatures[i-1] is Sign_{x,i}
  Digest anchor0;                  // mu_0 = hash(M_{1,1})
  SymKey auth_commitment;          // K_Auth0

  std::size_t lifetime() const { return signatures.size(); }
};

/// Binary credential file:
///   magic "WSNC" | version u8 (=1) | backend u8 | id u16
///   | order_len u8 | order | gen_len u8 | generator
///   | pub_len u8 | public | priv_len u8 | private
///   | anchor0 (20) | K_Auth0 (16) | m u16 | m x signature (16)
Bytes encode_credentials(const NodeCredentials& c);
NodeCredentials decode_credentials(ByteView file);
void write_credentials(const std::filesystem::path& path, const NodeCredentials& c);
NodeCredentials read_credentials(const std::filesystem::path& path);

}  // namespace wsnkm
