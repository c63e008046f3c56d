#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "wsnkm/codec.hpp"
#include "wsnkm/dh_group.hpp"
#include "wsnkm/energy.hpp"

namespace wsnkm {

struct NodeConfig {
  Variant mode = Variant::iba;
  /// Pending-buffer capacity in octets (cycle messages, tickets, revocations).
  std::size_t buffer_capacity = 4096;
  /// Tolerance of the |(T_xi - T_xi-1) - delta_i| freshness check, seconds.
  double freshness_epsilon = 1.0;
  /// System disclosure delay t. Tickets for cycle i must arrive no later than
  /// t - epsilon after the cycle-i message. 0 disables the window.
  double disclosure_delay = 0;
  /// Maximum number of missed disclosures bridged when verifying a key.
  std::size_t max_chain_gap = 8;
  /// Delayed-authentication slots used only after a node has lost its anchor.
  std::size_t resync_slots = 2;
  /// Anchor-verified candidates kept per cycle (they may differ in part 2).
  std::size_t max_candidates = 2;
};

enum class Verdict : std::uint8_t {
  accepted,
  rejected,
  duplicate,
  resync,       // admitted without an anchor after authenticated evidence of a missed cycle
  dropped_full, // buffer capacity exhausted
};
std::string_view to_string(Verdict v);

enum class Reason : std::uint8_t {
  none,
  anchor_mismatch,  // hash(M_i1) != mu_{i-1}
  no_anchor,
  stale,
  chain_link,
  counter_mismatch,
  padding,
  freshness,
  late_ticket,
  bad_signature,
  revoked,
  no_message,
  bad_tag,
};
std::string_view to_string(Reason r);

struct CycleResult {
  Verdict verdict = Verdict::rejected;
  Reason reason = Reason::none;
};

struct AckToSend {
  NodeId to = 0;
  AckMessage ack;
};

struct DisclosureResult {
  Verdict verdict = Verdict::rejected;  // accepted iff the key verified against the chain
  Reason reason = Reason::none;         // why no cycle message was authenticated, if none was
  CycleIndex cycle = 0;
  bool message_authenticated = false;
  std::size_t discarded_messages = 0;
  std::vector<NodeId> keys_derived;
  std::vector<NodeId> tickets_rejected;
  std::vector<AckToSend> acks;
};

struct PairKey {
  CycleIndex cycle = 0;
  SymKey key;
  bool confirmed = false;
};

struct NodeStats {
  std::size_t cycle_accepted = 0;
  std::size_t cycle_rejected = 0;
  std::size_t cycle_resync = 0;
  std::size_t dropped_full = 0;
  std::size_t adversary_admitted = 0;  // ground truth: adversary-origin messages let into the buffer
  std::size_t adversary_authenticated = 0;  // ground truth: adversary-origin message opened at disclosure
  std::size_t disclosures_ok = 0;
  std::size_t disclosures_rejected = 0;
  std::size_t cycles_completed = 0;
  std::size_t tamper_detected = 0;     // counter/padding mismatch at disclosure
  std::size_t freshness_failures = 0;
  std::size_t keys_derived = 0;
  std::size_t tickets_rejected = 0;
  std::size_t acks_verified = 0;
  std::size_t acks_failed = 0;
};

/// Protocol state machine of one sensor node. All times passed in are the
/// node's local clock. Primitive costs are charged to the ledger when one is
/// attached.
class SensorNode {
 public:
  SensorNode(NodeCredentials credentials, NodeConfig config, double bootstrap_local_time,
             EnergyLedger* ledger = nullptr);

  NodeId id() const { return creds_.id; }
  const NodeConfig& config() const { return config_; }
  const NodeCredentials& credentials() const { return creds_; }
  const DhGroup& group() const { return *group_; }

  // --- ticket exchange -------------------------------------------------------
  /// Throws Error{depleted} when no signature exists for `cycle`.
  Ticket emit_ticket(CycleIndex cycle);
  std::size_t remaining_signatures() const;
  bool has_signature_for(CycleIndex cycle) const;
  /// Whether the node still has links to set up (or has heard nobody yet).
  bool wants_to_participate() const;

  Verdict on_ticket(NodeId from, const Ticket& ticket, double now, Origin origin = Origin::honest);
  bool verify_ticket(NodeId sender, const Ticket& ticket, const SymKey& k_ds);

  // --- base-station traffic --------------------------------------------------
  CycleResult on_cycle_message(const CycleMessage& msg, double now, Origin origin = Origin::honest);
  DisclosureResult on_disclosure(const DisclosureMessage& d, double now);
  Verdict on_revocation(const RevocationMessage& r, double now, Origin origin = Origin::honest);

  // --- key confirmation ------------------------------------------------------
  std::optional<AckMessage> make_ack(NodeId peer);
  bool on_ack(NodeId from, const AckMessage& ack);

  // --- inspection ------------------------------------------------------------
  const std::map<NodeId, PairKey>& pairwise_keys() const { return keys_; }
  std::optional<SymKey> key_with(NodeId peer) const;
  bool link_confirmed(NodeId peer) const;
  bool is_revoked(NodeId id) const { return revoked_.count(id) != 0; }
  const std::set<NodeId>& revoked() const { return revoked_; }

  std::size_t buffered_octets() const { return buffered_octets_; }
  std::size_t buffered_adversary_octets() const { return buffered_adversary_octets_; }
  std::size_t peak_adversary_octets() const { return peak_adversary_octets_; }
  std::size_t pending_cycle_messages() const { return cycle_msgs_.size(); }
  std::size_t pending_tickets() const { return tickets_.size(); }

  bool has_anchor() const { return anchor_valid_; }
  CycleIndex anchor_cycle() const { return anchor_cycle_; }
  CycleIndex last_disclosed_cycle() const { return checkpoint_cycle_; }
  CycleIndex last_completed_cycle() const { return last_cycle_; }
  const NodeStats& stats() const { return stats_; }
  /// (cycle, peer) of every key derivation, in order.
  const std::vector<std::pair<CycleIndex, NodeId>>& derivation_log() const { return derivation_log_; }

 private:
  struct PendingCycle {
    CycleMessage msg;
    double arrival = 0;
    std::size_t octets = 0;
    Origin origin = Origin::honest;
    bool resync = false;
  };
  struct PendingTicket {
    Ticket ticket;
    double arrival = 0;
    std::size_t octets = 0;
    Origin origin = Origin::honest;
  };
  struct PendingRevocation {
    RevocationMessage msg;
    std::size_t octets = 0;
    Origin origin = Origin::honest;
  };

  void charge(Op op, Origin origin = Origin::honest);
  bool reserve(std::size_t octets, Origin origin);
  void release(std::size_t octets, Origin origin);
  bool anchor_overdue(double now) const;
  bool fresh(double arrival, std::uint16_t delta_s, CycleIndex cycle) const;

  struct Opened {
    SymKey k_ds;
    std::optional<Digest> next_anchor;
    double arrival = 0;
    Origin origin = Origin::honest;
  };
  std::optional<Opened> authenticate(const PendingCycle& p, const SymKey& k_auth, CycleIndex cycle,
                                     Reason& why);

  NodeCredentials creds_;
  NodeConfig config_;
  std::shared_ptr<const DhGroup> group_;
  EnergyLedger* ledger_;

  // chain / anchor state
  SymKey checkpoint_key_;
  CycleIndex checkpoint_cycle_ = 0;
  Digest anchor_;
  CycleIndex anchor_cycle_ = 1;
  bool anchor_valid_ = true;
  CycleIndex last_cycle_ = 0;
  double last_cycle_time_ = 0;

  // pending buffer
  std::vector<PendingCycle> cycle_msgs_;
  std::map<std::pair<CycleIndex, NodeId>, PendingTicket> tickets_;
  std::vector<PendingRevocation> revocations_;
  std::size_t buffered_octets_ = 0;
  std::size_t buffered_adversary_octets_ = 0;
  std::size_t peak_adversary_octets_ = 0;

  CycleIndex last_emitted_ = 0;
  std::set<NodeId> heard_;
  std::map<NodeId, PairKey> keys_;
  // superseded unconfirmed keys, kept until the peer's ack picks one
  std::map<NodeId, std::vector<PairKey>> earlier_keys_;
  std::set<NodeId> revoked_;
  NodeStats stats_;
  std::vector<std::pair<CycleIndex, NodeId>> derivation_log_;
};

/// A sends its key-confirmation token to B; true when B verifies it.
bool complete_ack(SensorNode& a, SensorNode& b);

}  // namespace wsnkm
