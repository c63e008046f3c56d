#pragma once

#include <memory>
#include <vector>

#include "wsnkm/codec.hpp"
#include "wsnkm/crypto.hpp"
#include "wsnkm/dh_group.hpp"

namespace wsnkm {

/// The base station. Holds the authentication chain (K_Auth) and the
/// signature-key chain (K_DS), the BS-local cycle schedule, and issues
/// credentials, cycle messages, disclosures and revocation lists.
///
/// schedule()[0] is the bootstrap time T_BS0; schedule()[i] is T_BSi for
/// cycle i in 1..n. delta(i) = round(T_BSi - T_BSi-1) seconds.
class TrustCenter {
 public:
  /// Throws Error{invalid_length} for n == 0 and Error{invalid_schedule} when
  /// the schedule is not n+1 strictly increasing times with gaps > t > 0.
  static TrustCenter init(std::size_t n, double disclosure_delay_s, std::vector<double> schedule,
                          Rng& rng, GroupParams group = GroupParams::ecc160());

  /// Evenly spaced schedule: T_BS0 = start, T_BSi = start + i * gap.
  static std::vector<double> uniform_schedule(std::size_t n, double start_s, double gap_s);

  std::size_t cycles() const { return auth_chain_.length(); }
  double disclosure_delay() const { return disclosure_delay_; }
  const std::vector<double>& schedule() const { return schedule_; }
  double cycle_time(std::size_t i) const { return schedule_.at(i); }
  std::uint32_t delta(std::size_t i) const;
  CycleIndex current_cycle() const { return current_; }

  const crypto::KeyChain& auth_chain() const { return auth_chain_; }
  const crypto::KeyChain& ds_chain() const { return ds_chain_; }
  const DhGroup& group() const { return *group_; }
  std::shared_ptr<const DhGroup> group_ptr() const { return group_; }

  /// Throws Error{insufficient_chain} when lifetime > cycles().
  NodeCredentials provision_node(NodeId id, std::size_t lifetime, Rng& rng) const;

  /// BA: 1 <= i <= n. iBA: 1 <= i <= n-1 (part2 commits to cycle i+1).
  /// Throws Error{chain_exhausted} out of range. Advances current_cycle().
  CycleMessage build_cycle_message(std::size_t i, Variant variant);
  /// Same message without touching the cycle counter.
  CycleMessage peek_cycle_message(std::size_t i, Variant variant) const;

  /// Throws Error{too_early} when bs_now < T_BSi + t.
  DisclosureMessage build_disclosure(std::size_t i, double bs_now) const;

  /// Compromised-id list for cycle i, tagged with K_Auth_i (verifiable once
  /// K_Auth_i is disclosed).
  RevocationMessage build_revocation(std::size_t i, std::vector<NodeId> ids) const;

  /// mu_{i-1} = hash(M_{i,1}); anchor(0) is what nodes are preloaded with.
  Digest anchor(std::size_t i) const;

 private:
  TrustCenter(crypto::KeyChain auth, crypto::KeyChain ds, std::vector<double> schedule, double t,
              std::shared_ptr<const DhGroup> group)
      : auth_chain_(std::move(auth)), ds_chain_(std::move(ds)), schedule_(std::move(schedule)),
        disclosure_delay_(t), group_(std::move(group)) {}

  Bytes part1(std::size_t i) const;

  crypto::KeyChain auth_chain_;
  crypto::KeyChain ds_chain_;
  std::vector<double> schedule_;
  double disclosure_delay_;
  std::shared_ptr<const DhGroup> group_;
  CycleIndex current_ = 0;
};

SymKey random_key(Rng& rng);

}  // namespace wsnkm
