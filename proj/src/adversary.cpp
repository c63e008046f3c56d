#include "wsnkm/adversary.hpp"

#include <cmath>
#include <set>

#include "wsnkm/crypto.hpp"

namespace wsnkm {

std::string_view to_string(AttackKind k) {
  switch (k) {
    case AttackKind::memory_flood: return "memory-flood";
    case AttackKind::energy_flood: return "energy-flood";
    case AttackKind::tamper: return "tamper";
    case AttackKind::replay_1: return "replay-1";
    case AttackKind::replay_2: return "replay-2";
    case AttackKind::replay_3: return "replay-3";
  }
  return "?";
}

AttackKind parse_attack(std::string_view name) {
  for (auto k : {AttackKind::memory_flood, AttackKind::energy_flood, AttackKind::tamper, AttackKind::replay_1,
                 AttackKind::replay_2, AttackKind::replay_3}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::parse, "unknown attack '" + std::string(name) + "'");
}

void AttackPlan::validate() const {
  if (kind == AttackKind::memory_flood && !(tau_minutes > 1)) {
    throw Error(ErrorKind::validation, "tau must exceed 1 minute");
  }
  if (!(window_minutes >= 0)) throw Error(ErrorKind::validation, "attack window must be non-negative");
  if (!(range >= 0)) throw Error(ErrorKind::validation, "attack range must be non-negative");
}

Bytes tamper(ByteView message, std::size_t bit) {
  if (bit >= message.size() * 8) throw Error(ErrorKind::invalid_length, "bit index beyond message");
  Bytes out(message.begin(), message.end());
  out[bit / 8] ^= static_cast<std::uint8_t>(0x80u >> (bit % 8));
  return out;
}

namespace {

Bytes random_octets(std::size_t n, Rng& rng) {
  Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

const AirRecord* find_air(const Simulation& sim, MsgKind kind, CycleIndex cycle) {
  for (const auto& r : sim.air_log()) {
    if (r.kind == kind && r.cycle == cycle) return &r;
  }
  return nullptr;
}

const AirRecord& require_air(const Simulation& sim, MsgKind kind, CycleIndex cycle) {
  const AirRecord* r = find_air(sim, kind, cycle);
  if (!r) throw Error(ErrorKind::validation, "nothing recorded to replay");
  return *r;
}

std::size_t keys_in_cycle(const SensorNode& n, CycleIndex cycle) {
  std::size_t k = 0;
  for (auto [c, peer] : n.derivation_log()) k += c == cycle;
  return k;
}

}  // namespace

CycleMessage bogus_cycle_message(Variant variant, CycleIndex cycle, Rng& rng) {
  CycleMessage m;
  m.variant = variant;
  m.part1 = random_octets(kCipherOctets, rng);
  if (variant == Variant::iba) {
    m.part2 = random_octets(kCipherOctets, rng);
    m.cycle = cycle;
  }
  return m;
}

MemoryFloodResult inject_memory_flood(Simulation& sim, const AttackPlan& plan, Rng& rng) {
  plan.validate();
  MemoryFloodResult res;
  const NodeId target = plan.target;
  const double t_i = sim.cycle_time(plan.cycle);
  const NodeId adv = sim.attach_radio(sim.graph().position(target), 0.0);
  std::uniform_real_distribution<double> when(1.0, plan.tau_minutes);
  for (std::size_t k = 0; k < plan.count; ++k) {
    double at = t_i + 60.0 * when(rng);
    Bytes wire = bogus_cycle_message(sim.config().variant, plan.cycle, rng).encode();
    sim.events().schedule(at, [&sim, &res, adv, target, at, t_i, wire = std::move(wire)] {
      sim.transmit(at, adv, MsgKind::cycle, wire, Origin::adversary, std::vector<NodeId>{target});
      res.series.emplace_back(at - t_i, sim.node(target).buffered_adversary_octets());
    });
  }
  res.injected = plan.count;
  sim.run_until(std::nextafter(sim.disclosure_time(plan.cycle), 0.0));
  res.buffered_at_disclosure = sim.node(target).buffered_adversary_octets();
  sim.run();
  res.admitted = sim.node(target).stats().adversary_admitted;
  return res;
}

EnergyFloodResult inject_energy_flood(Simulation& sim, const AttackPlan& plan, Rng& rng) {
  plan.validate();
  EnergyFloodResult res;
  const double side = sim.graph().side();
  std::uniform_real_distribution<double> coord(0.0, side);
  Point where = plan.position ? *plan.position : Point{coord(rng), coord(rng)};
  const double range = plan.range > 0 ? plan.range : sim.graph().range();
  const NodeId adv = sim.attach_radio(where, range);
  res.adversary_degree = sim.graph().neighbors(adv).size();

  const double t_i = sim.cycle_time(plan.cycle);
  std::uniform_real_distribution<double> when(0.0, plan.window_minutes);
  std::size_t wire_octets = 0;
  for (std::size_t k = 0; k < plan.count; ++k) {
    Bytes wire = bogus_cycle_message(sim.config().variant, plan.cycle, rng).encode();
    wire_octets = wire.size();
    sim.inject(t_i + 60.0 * when(rng), adv, MsgKind::cycle, std::move(wire), Origin::adversary);
  }
  sim.run();

  res.injected = plan.count;
  const auto& costs = sim.config().costs;
  res.retransmission_mj = sim.ledger().network_adversary_retransmission();
  res.induced_mj = sim.ledger().network_adversary_induced();
  if (wire_octets) {
    double per_relay = double(on_air_octets(wire_octets)) * costs.tx_per_octet;
    res.relays = per_relay > 0 ? static_cast<std::size_t>(std::llround(res.retransmission_mj / per_relay)) : 0;
    res.one_hop_bound_mj = double(res.adversary_degree) * double(plan.count) *
                           (double(on_air_octets(wire_octets)) * costs.rx_per_octet + costs.sha1);
  }
  for (std::size_t v = 0; v < sim.size(); ++v) res.admitted += sim.node(static_cast<NodeId>(v)).stats().adversary_admitted;
  return res;
}

std::string_view to_string(Replay3Variant v) {
  switch (v) {
    case Replay3Variant::late_tickets: return "late_tickets";
    case Replay3Variant::delayed_message: return "delayed_message";
    case Replay3Variant::altered_delta: return "altered_delta";
  }
  return "?";
}

ReplayOutcome replay_case_1(Simulation& sim, NodeId target) {
  ReplayOutcome out;
  out.replay_case = 1;
  out.variant = "retransmit";
  const NodeId adv = sim.attach_radio(sim.graph().position(target), 0.0);
  const double at = sim.cycle_time(1) + 60.0;
  sim.events().schedule(at, [&sim, adv, target, at] {
    const auto& rec = require_air(sim, MsgKind::cycle, 1);
    sim.transmit(at, adv, MsgKind::cycle, rec.wire, Origin::adversary, std::vector<NodeId>{target});
  });
  sim.run();

  const SensorNode& t = sim.node(target);
  std::set<std::pair<CycleIndex, NodeId>> unique(t.derivation_log().begin(), t.derivation_log().end());
  bool no_duplicates = unique.size() == t.derivation_log().size();
  std::size_t links = 0, established = 0;
  for (NodeId v : sim.graph().neighbors(target)) {
    if (v >= sim.size()) continue;
    ++links;
    auto a = t.key_with(v);
    auto b = sim.node(v).key_with(target);
    established += a && b && *a == *b && t.link_confirmed(v) && sim.node(v).link_confirmed(target);
  }
  out.target_keys = keys_in_cycle(t, 1);
  out.adversary_authenticated = t.stats().adversary_authenticated;
  out.passed = no_duplicates && established == links;
  out.detail = "links " + std::to_string(established) + "/" + std::to_string(links) +
               (no_duplicates ? ", no duplicate derivations" : ", duplicate derivations");
  return out;
}

ReplayOutcome replay_case_2(Simulation& sim, NodeId target, bool rewrite_index) {
  if (sim.config().cycles < 2) throw Error(ErrorKind::validation, "replay case 2 needs two cycles");
  ReplayOutcome out;
  out.replay_case = 2;
  out.variant = rewrite_index ? "old_message_new_index" : "old_message";
  const NodeId adv = sim.attach_radio(sim.graph().position(target), 0.0);
  // the target misses the genuine messages, so the replay is its only candidate
  sim.jam(target, MsgKind::cycle, 1);
  sim.jam(target, MsgKind::cycle, 2);
  const double at = sim.cycle_time(2) + 60.0;
  const Variant variant = sim.config().variant;
  sim.events().schedule(at, [&sim, adv, target, at, rewrite_index, variant] {
    Bytes wire = require_air(sim, MsgKind::cycle, 1).wire;
    if (rewrite_index && variant == Variant::iba) {
      CycleMessage m = CycleMessage::decode(variant, wire);
      m.cycle = 2;
      wire = m.encode();
    }
    sim.transmit(at, adv, MsgKind::cycle, wire, Origin::adversary, std::vector<NodeId>{target});
  });
  sim.run();

  const SensorNode& t = sim.node(target);
  out.target_keys = keys_in_cycle(t, 2);
  out.adversary_authenticated = t.stats().adversary_authenticated;
  out.passed = out.target_keys == 0 && out.adversary_authenticated == 0;
  out.detail = "rejected on arrival " + std::to_string(t.stats().cycle_rejected) + ", admitted " +
               std::to_string(t.stats().adversary_admitted) + ", keys in cycle 2 " +
               std::to_string(out.target_keys);
  return out;
}

ReplayOutcome replay_case_3(Simulation& sim, NodeId target, Replay3Variant variant, Rng& rng) {
  ReplayOutcome out;
  out.replay_case = 3;
  out.variant = std::string(to_string(variant));
  const NodeId adv = sim.attach_radio(sim.graph().position(target), 0.0);
  sim.jam(target, MsgKind::disclosure, 1);
  if (variant != Replay3Variant::late_tickets) sim.jam(target, MsgKind::cycle, 1);

  DhKeyPair adv_key = sim.trust_center().group().keygen(rng);
  const std::uint32_t delta = sim.trust_center().delta(1);
  const double t = sim.config().disclosure_delay;
  // just after the disclosure has gone out, K_Auth_1 is public
  const double at = sim.disclosure_time(1) + 1e-3;
  sim.events().schedule(at, [&sim, adv, target, at, variant, adv_key, delta, t] {
    const Variant v = sim.config().variant;
    DisclosureMessage d = DisclosureMessage::decode(require_air(sim, MsgKind::disclosure, 1).wire);
    CycleMessage msg = CycleMessage::decode(v, require_air(sim, MsgKind::cycle, 1).wire);
    SymKey k_ds = open_cycle_body(d.key, msg.part1).k_ds;
    Ticket forged{1, adv_key.public_key, crypto::mac(k_ds, adv_key.public_key)};
    std::vector<NodeId> to{target};

    double disclose_at = at + 30.0;
    switch (variant) {
      case Replay3Variant::late_tickets:
        break;
      case Replay3Variant::delayed_message:
        sim.inject(at + 30.0, adv, MsgKind::cycle, msg.encode(), Origin::adversary, to);
        disclose_at = at + 60.0;
        break;
      case Replay3Variant::altered_delta:
        // arriving t late, so stretch delta by t to keep the freshness check happy
        msg.part1 = seal_cycle_body(d.key, k_ds, 1, delta + static_cast<std::uint32_t>(std::lround(t)));
        sim.transmit(at, adv, MsgKind::cycle, msg.encode(), Origin::adversary, to);
        break;
    }
    sim.transmit(at, adv, MsgKind::ticket, forged.encode(), Origin::adversary, to);
    sim.inject(disclose_at, adv, MsgKind::disclosure, d.encode(), Origin::adversary, to);
  });
  sim.run();

  const SensorNode& n = sim.node(target);
  out.adversary_keys = n.key_with(adv) ? 1 : 0;
  out.target_keys = keys_in_cycle(n, 1);
  out.adversary_authenticated = n.stats().adversary_authenticated;
  out.passed = out.adversary_keys == 0 && out.adversary_authenticated == 0;
  out.detail = "rejected on arrival " + std::to_string(n.stats().cycle_rejected) + ", freshness failures " +
               std::to_string(n.stats().freshness_failures) + ", tickets rejected " +
               std::to_string(n.stats().tickets_rejected) + ", adversary key " +
               (out.adversary_keys ? "yes" : "no");
  return out;
}

}  // namespace wsnkm
