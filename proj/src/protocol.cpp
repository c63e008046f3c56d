#include "wsnkm/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "wsnkm/crypto.hpp"

namespace wsnkm {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::accepted: return "accepted";
    case Verdict::rejected: return "rejected";
    case Verdict::duplicate: return "duplicate";
    case Verdict::resync: return "resync";
    case Verdict::dropped_full: return "dropped_full";
  }
  return "?";
}

std::string_view to_string(Reason r) {
  switch (r) {
    case Reason::none: return "none";
    case Reason::anchor_mismatch: return "anchor_mismatch";
    case Reason::no_anchor: return "no_anchor";
    case Reason::stale: return "stale";
    case Reason::chain_link: return "chain_link";
    case Reason::counter_mismatch: return "counter_mismatch";
    case Reason::padding: return "padding";
    case Reason::freshness: return "freshness";
    case Reason::late_ticket: return "late_ticket";
    case Reason::bad_signature: return "bad_signature";
    case Reason::revoked: return "revoked";
    case Reason::no_message: return "no_message";
    case Reason::bad_tag: return "bad_tag";
  }
  return "?";
}

SensorNode::SensorNode(NodeCredentials credentials, NodeConfig config, double bootstrap_local_time,
                       EnergyLedger* ledger)
    : creds_(std::move(credentials)),
      config_(config),
      group_(make_group(creds_.group)),
      ledger_(ledger),
      checkpoint_key_(creds_.auth_commitment),
      anchor_(creds_.anchor0),
      last_cycle_time_(bootstrap_local_time) {}

void SensorNode::charge(Op op, Origin origin) {
  if (ledger_) ledger_->charge_op(creds_.id, op, origin);
}

bool SensorNode::reserve(std::size_t octets, Origin origin) {
  if (buffered_octets_ + octets > config_.buffer_capacity) return false;
  buffered_octets_ += octets;
  if (origin == Origin::adversary) {
    buffered_adversary_octets_ += octets;
    peak_adversary_octets_ = std::max(peak_adversary_octets_, buffered_adversary_octets_);
  }
  return true;
}

void SensorNode::release(std::size_t octets, Origin origin) {
  buffered_octets_ -= octets;
  if (origin == Origin::adversary) buffered_adversary_octets_ -= octets;
}

// --- tickets -----------------------------------------------------------------

bool SensorNode::has_signature_for(CycleIndex cycle) const {
  return cycle >= 1 && cycle <= creds_.lifetime() && cycle > last_emitted_;
}

std::size_t SensorNode::remaining_signatures() const {
  return creds_.lifetime() > last_emitted_ ? creds_.lifetime() - last_emitted_ : 0;
}

Ticket SensorNode::emit_ticket(CycleIndex cycle) {
  if (!has_signature_for(cycle)) {
    throw Error(ErrorKind::depleted, "node " + std::to_string(id()) + " has no signature for cycle " +
                                         std::to_string(cycle));
  }
  last_emitted_ = cycle;
  return {cycle, creds_.keypair.public_key, creds_.signatures[cycle - 1]};
}

bool SensorNode::wants_to_participate() const {
  if (heard_.empty()) return true;
  return std::any_of(heard_.begin(), heard_.end(),
                     [this](NodeId n) { return !is_revoked(n) && !link_confirmed(n); });
}

Verdict SensorNode::on_ticket(NodeId from, const Ticket& ticket, double now, Origin origin) {
  if (ticket.cycle <= checkpoint_cycle_) return Verdict::rejected;
  std::size_t octets = ticket.encode().size();
  auto key = std::make_pair(ticket.cycle, from);
  Verdict verdict = Verdict::accepted;
  if (auto it = tickets_.find(key); it != tickets_.end()) {
    release(it->second.octets, it->second.origin);
    tickets_.erase(it);
    verdict = Verdict::duplicate;
  }
  if (!reserve(octets, origin)) {
    ++stats_.dropped_full;
    return Verdict::dropped_full;
  }
  tickets_[key] = PendingTicket{ticket, now, octets, origin};
  heard_.insert(from);
  return verdict;
}

bool SensorNode::verify_ticket(NodeId sender, const Ticket& ticket, const SymKey& k_ds) {
  if (is_revoked(sender)) return false;
  charge(Op::hmac);
  return ticket.public_key.size() == group_->public_octets() &&
         crypto::mac(k_ds, ticket.public_key) == ticket.signature;
}

// --- cycle messages ------------------------------------------------------------

bool SensorNode::anchor_overdue(double now) const {
  if (config_.disclosure_delay <= 0) return false;
  return std::any_of(cycle_msgs_.begin(), cycle_msgs_.end(), [&](const PendingCycle& p) {
    return !p.resync && p.msg.cycle == anchor_cycle_ &&
           now > p.arrival + config_.disclosure_delay + config_.freshness_epsilon;
  });
}

CycleResult SensorNode::on_cycle_message(const CycleMessage& msg, double now, Origin origin) {
  std::size_t octets = msg.wire_octets();

  if (config_.mode == Variant::ba) {
    // no way to tell a forged message from a genuine one until K_Auth_i shows up
    if (!reserve(octets, origin)) {
      ++stats_.dropped_full;
      return {Verdict::dropped_full, Reason::none};
    }
    cycle_msgs_.push_back({msg, now, octets, origin, false});
    ++stats_.cycle_accepted;
    if (origin == Origin::adversary) ++stats_.adversary_admitted;
    return {Verdict::accepted, Reason::none};
  }

  if (msg.cycle <= checkpoint_cycle_) {
    ++stats_.cycle_rejected;
    return {Verdict::rejected, Reason::stale};
  }

  if (anchor_valid_ && anchor_overdue(now)) {
    // the disclosure for the anchored cycle never arrived
    anchor_valid_ = false;
  }

  if (anchor_valid_ && msg.cycle == anchor_cycle_) {
    charge(Op::sha1, origin);
    if (crypto::hash(msg.part1) != anchor_) {
      ++stats_.cycle_rejected;
      return {Verdict::rejected, Reason::anchor_mismatch};
    }
    std::size_t candidates = 0;
    for (const auto& p : cycle_msgs_) {
      if (p.msg.cycle != msg.cycle) continue;
      if (p.msg.part2 == msg.part2) return {Verdict::duplicate, Reason::none};
      ++candidates;
    }
    if (candidates >= config_.max_candidates || !reserve(octets, origin)) {
      ++stats_.dropped_full;
      return {Verdict::dropped_full, Reason::none};
    }
    cycle_msgs_.push_back({msg, now, octets, origin, false});
    ++stats_.cycle_accepted;
    if (origin == Origin::adversary) ++stats_.adversary_admitted;
    return {Verdict::accepted, Reason::none};
  }

  if (!anchor_valid_) {
    auto used = static_cast<std::size_t>(
        std::count_if(cycle_msgs_.begin(), cycle_msgs_.end(), [](const PendingCycle& p) { return p.resync; }));
    if (used < config_.resync_slots && reserve(octets, origin)) {
      cycle_msgs_.push_back({msg, now, octets, origin, true});
      ++stats_.cycle_resync;
      if (origin == Origin::adversary) ++stats_.adversary_admitted;
      return {Verdict::resync, Reason::no_anchor};
    }
  }
  ++stats_.cycle_rejected;
  return {Verdict::rejected, Reason::no_anchor};
}

bool SensorNode::fresh(double arrival, std::uint16_t delta_s, CycleIndex cycle) const {
  double elapsed = arrival - last_cycle_time_;
  if (last_cycle_ + 1 == cycle) return std::abs(elapsed - delta_s) <= config_.freshness_epsilon;
  // cycles were missed: only the last gap is known
  return elapsed >= delta_s - config_.freshness_epsilon;
}

std::optional<SensorNode::Opened> SensorNode::authenticate(const PendingCycle& p, const SymKey& k_auth,
                                                           CycleIndex cycle, Reason& why) {
  charge(Op::aes, p.origin);
  CycleBody body = open_cycle_body(k_auth, p.msg.part1);
  if (body.cycle != cycle) {
    why = Reason::counter_mismatch;
    return std::nullopt;
  }
  if (!body.padding_ok) {
    why = Reason::padding;
    return std::nullopt;
  }
  Opened out{body.k_ds, std::nullopt, p.arrival, p.origin};
  if (config_.mode == Variant::iba) {
    charge(Op::aes, p.origin);
    AnchorBody next = open_anchor_body(k_auth, p.msg.part2);
    if (next.cycle != cycle) {
      why = Reason::counter_mismatch;
      return std::nullopt;
    }
    if (!next.padding_ok) {
      why = Reason::padding;
      return std::nullopt;
    }
    out.next_anchor = next.next_anchor;
  }
  if (!fresh(p.arrival, body.delta_s, cycle)) {
    why = Reason::freshness;
    return std::nullopt;
  }
  return out;
}

DisclosureResult SensorNode::on_disclosure(const DisclosureMessage& d, double /*now*/) {
  DisclosureResult res;
  res.cycle = d.cycle;
  if (d.cycle <= checkpoint_cycle_) {
    ++stats_.disclosures_rejected;
    res.reason = Reason::stale;
    return res;
  }
  std::size_t gap = d.cycle - checkpoint_cycle_;
  if (gap > config_.max_chain_gap) {
    ++stats_.disclosures_rejected;
    res.reason = Reason::chain_link;
    return res;
  }
  SymKey cur = d.key;
  for (std::size_t s = 0; s < gap; ++s) {
    cur = crypto::derive_link(cur);
    charge(Op::sha1);
  }
  if (cur != checkpoint_key_) {
    ++stats_.disclosures_rejected;
    res.reason = Reason::chain_link;
    return res;
  }
  checkpoint_key_ = d.key;
  checkpoint_cycle_ = d.cycle;
  ++stats_.disclosures_ok;
  res.verdict = Verdict::accepted;

  // revocation lists tagged with this key
  for (auto it = revocations_.begin(); it != revocations_.end();) {
    if (it->msg.cycle <= d.cycle) {
      if (it->msg.cycle == d.cycle) {
        charge(Op::hmac, it->origin);
        if (crypto::mac(d.key, it->msg.signed_body()) == it->msg.tag) {
          for (NodeId id : it->msg.ids) {
            revoked_.insert(id);
            keys_.erase(id);
            earlier_keys_.erase(id);
          }
        }
      }
      release(it->octets, it->origin);
      it = revocations_.erase(it);
    } else {
      ++it;
    }
  }

  // authenticate the buffered cycle message(s)
  std::optional<Opened> opened;
  Reason why = Reason::no_message;
  for (auto it = cycle_msgs_.begin(); it != cycle_msgs_.end();) {
    bool candidate = config_.mode == Variant::ba || it->msg.cycle == d.cycle;
    bool expired = config_.mode == Variant::ba || it->msg.cycle <= d.cycle;
    if (candidate && !opened) {
      Reason r = Reason::none;
      opened = authenticate(*it, d.key, d.cycle, r);
      if (!opened) {
        why = r;
        ++res.discarded_messages;
        if (r == Reason::counter_mismatch || r == Reason::padding) ++stats_.tamper_detected;
        if (r == Reason::freshness) ++stats_.freshness_failures;
      }
    } else if (candidate) {
      ++res.discarded_messages;
    }
    if (expired) {
      release(it->octets, it->origin);
      it = cycle_msgs_.erase(it);
    } else {
      ++it;
    }
  }

  if (opened) {
    res.message_authenticated = true;
    last_cycle_ = d.cycle;
    last_cycle_time_ = opened->arrival;
    ++stats_.cycles_completed;
    if (opened->origin == Origin::adversary) ++stats_.adversary_authenticated;
    if (opened->next_anchor) {
      anchor_ = *opened->next_anchor;
      anchor_cycle_ = static_cast<CycleIndex>(d.cycle + 1);
      anchor_valid_ = true;
    }
    double window_end = opened->arrival + config_.disclosure_delay - config_.freshness_epsilon;
    for (auto& [key, pt] : tickets_) {
      auto [cycle, sender] = key;
      if (cycle != d.cycle) continue;
      if (config_.disclosure_delay > 0 && pt.arrival > window_end) {
        res.tickets_rejected.push_back(sender);
        ++stats_.tickets_rejected;
        continue;
      }
      if (!verify_ticket(sender, pt.ticket, opened->k_ds)) {
        res.tickets_rejected.push_back(sender);
        ++stats_.tickets_rejected;
        continue;
      }
      auto existing = keys_.find(sender);
      if (existing != keys_.end() && existing->second.confirmed) {
        // peer is still waiting for our confirmation
        charge(Op::hmac);
        res.acks.push_back({sender, {existing->second.cycle,
                                     crypto::ack_token(existing->second.key, id(), sender)}});
        continue;
      }
      Bytes shared;
      try {
        shared = group_->shared(creds_.keypair.private_key, pt.ticket.public_key);
      } catch (const Error&) {
        res.tickets_rejected.push_back(sender);
        ++stats_.tickets_rejected;
        continue;
      }
      charge(Op::ecdh);
      SymKey k = crypto::kdf_pairwise(shared, d.cycle);
      if (existing != keys_.end()) {
        // the peer may have confirmed the older key; its re-ack will say so
        auto& older = earlier_keys_[sender];
        older.push_back(existing->second);
        if (older.size() > config_.max_chain_gap) older.erase(older.begin());
      }
      keys_[sender] = PairKey{d.cycle, k, false};
      derivation_log_.emplace_back(d.cycle, sender);
      res.keys_derived.push_back(sender);
      ++stats_.keys_derived;
      charge(Op::hmac);
      res.acks.push_back({sender, {d.cycle, crypto::ack_token(k, id(), sender)}});
    }
  } else {
    res.reason = why;
    if (config_.mode == Variant::iba && anchor_cycle_ <= d.cycle) anchor_valid_ = false;
  }

  // tickets for this or older cycles can never be checked again
  for (auto it = tickets_.begin(); it != tickets_.end();) {
    if (it->first.first <= d.cycle) {
      release(it->second.octets, it->second.origin);
      it = tickets_.erase(it);
    } else {
      ++it;
    }
  }
  return res;
}

Verdict SensorNode::on_revocation(const RevocationMessage& r, double /*now*/, Origin origin) {
  if (r.cycle <= checkpoint_cycle_) return Verdict::rejected;
  std::size_t octets = r.encode().size();
  if (!reserve(octets, origin)) {
    ++stats_.dropped_full;
    return Verdict::dropped_full;
  }
  revocations_.push_back({r, octets, origin});
  return Verdict::accepted;
}

// --- key confirmation ------------------------------------------------------------

std::optional<AckMessage> SensorNode::make_ack(NodeId peer) {
  auto it = keys_.find(peer);
  if (it == keys_.end()) return std::nullopt;
  charge(Op::hmac);
  return AckMessage{it->second.cycle, crypto::ack_token(it->second.key, id(), peer)};
}

bool SensorNode::on_ack(NodeId from, const AckMessage& ack) {
  auto it = keys_.find(from);
  if (it == keys_.end()) {
    ++stats_.acks_failed;
    return false;
  }
  charge(Op::hmac);
  PairKey* match = ack.cycle == it->second.cycle ? &it->second : nullptr;
  if (!match && !it->second.confirmed) {
    auto older = earlier_keys_.find(from);
    if (older != earlier_keys_.end()) {
      for (auto& k : older->second) {
        if (k.cycle == ack.cycle) match = &k;
      }
    }
  }
  if (!match || !crypto::verify_ack(match->key, from, id(), ack.tag)) {
    ++stats_.acks_failed;
    return false;
  }
  if (match != &it->second) it->second = *match;
  it->second.confirmed = true;
  earlier_keys_.erase(from);
  ++stats_.acks_verified;
  return true;
}

std::optional<SymKey> SensorNode::key_with(NodeId peer) const {
  auto it = keys_.find(peer);
  if (it == keys_.end()) return std::nullopt;
  return it->second.key;
}

bool SensorNode::link_confirmed(NodeId peer) const {
  auto it = keys_.find(peer);
  return it != keys_.end() && it->second.confirmed;
}

bool complete_ack(SensorNode& a, SensorNode& b) {
  auto ack = a.make_ack(b.id());
  return ack && b.on_ack(a.id(), *ack);
}

}  // namespace wsnkm
