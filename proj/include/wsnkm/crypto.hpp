#pragma once

#include <cstddef>
#include <vector>

#include "wsnkm/types.hpp"

/// Deterministic symmetric primitives shared by the BA and i-BA protocols.
///
/// hash   : SHA-1 (20 octets)
/// mac    : HMAC-SHA1 truncated to 128 bits
/// cipher : AES-128-CBC, all-zero IV, no padding (callers pad via pad_to_block)
namespace wsnkm::crypto {

inline constexpr std::size_t kBlockOctets = 16;

Digest hash(ByteView message);

/// One step down a hash chain: first 16 octets of hash(k).
SymKey derive_link(const SymKey& k);

MacTag mac(const SymKey& key, ByteView message);

/// Zero-pads to a multiple of the cipher block (an empty input becomes one block).
Bytes pad_to_block(ByteView plaintext);

/// Throws Error{invalid_length} unless plaintext is block aligned.
Bytes encrypt(const SymKey& key, ByteView plaintext);
/// Throws Error{malformed_ciphertext} unless ciphertext is block aligned.
Bytes decrypt(const SymKey& key, ByteView ciphertext);

/// K_AB = first 16 octets of hash(shared || be16(cycle)).
SymKey kdf_pairwise(ByteView shared, CycleIndex cycle);

/// Key-confirmation tag: mac(k_ab, "ACK" || be16(from) || be16(to)).
MacTag ack_token(const SymKey& k_ab, NodeId from, NodeId to);
bool verify_ack(const SymKey& k_ab, NodeId from, NodeId to, const MacTag& tag);

/// Ordered hash chain. links()[n] is the seed, links()[0] the commitment, and
/// derive_link(links()[i]) == links()[i-1] for every 1 <= i <= n.
class KeyChain {
 public:
  /// Throws Error{invalid_length} when n == 0.
  static KeyChain generate(const SymKey& seed, std::size_t n);

  std::size_t length() const { return links_.size() - 1; }
  const SymKey& link(std::size_t i) const { return links_.at(i); }
  const SymKey& commitment() const { return links_.front(); }
  const std::vector<SymKey>& links() const { return links_; }

  /// Checks every link; returns the number of links that verify.
  std::size_t count_valid_links() const;
  bool verify() const { return count_valid_links() == length(); }

 private:
  explicit KeyChain(std::vector<SymKey> links) : links_(std::move(links)) {}
  std::vector<SymKey> links_;
};

/// Walks derive_link from `candidate` at most `max_steps` times looking for
/// `anchor`. Returns the number of steps taken, or 0 when not found.
std::size_t chain_distance(const SymKey& candidate, const SymKey& anchor,
                           std::size_t max_steps);

}  // namespace wsnkm::crypto
