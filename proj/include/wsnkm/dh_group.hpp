#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string_view>

#include "wsnkm/types.hpp"

namespace wsnkm {

using Rng = std::mt19937_64;

enum class GroupBackend : std::uint8_t { toy = 1, ecc160 = 2 };

std::string_view to_string(GroupBackend backend);
GroupBackend parse_backend(std::string_view name);

/// Domain parameters of a Diffie-Hellman group.
///
/// toy    : multiplicative group of the prime field Z_p. `order` holds p,
///          `generator` the big-endian generator. Private scalars live in [1, p-1].
/// ecc160 : SECG secp160r1. `order` holds the big-endian subgroup order and
///          `generator` the compressed base point.
struct GroupParams {
  GroupBackend backend = GroupBackend::ecc160;
  Bytes order;
  Bytes generator;

  static GroupParams toy(std::uint64_t prime, std::uint64_t generator);
  static GroupParams default_toy();
  static GroupParams ecc160();
  static GroupParams for_backend(GroupBackend backend);
};

struct DhKeyPair {
  Bytes public_key;   // P_u
  Bytes private_key;  // P_r, big-endian scalar
};

/// Abstract group used by both ends of a handshake.
class DhGroup {
 public:
  virtual ~DhGroup() = default;

  virtual const GroupParams& params() const = 0;
  virtual std::size_t public_octets() const = 0;
  virtual DhKeyPair keygen(Rng& rng) const = 0;
  /// Public key for a given private scalar (reduced into range first).
  virtual DhKeyPair from_private(ByteView private_key) const = 0;
  /// Canonical encoding of private * peer. Throws Error{invalid_point}.
  virtual Bytes shared(ByteView private_key, ByteView peer_public) const = 0;
  virtual bool is_valid_public(ByteView peer_public) const = 0;
};

/// Throws Error{invalid_params} for malformed parameters.
std::shared_ptr<const DhGroup> make_group(const GroupParams& params);

}  // namespace wsnkm
