#include "wsnkm/simulation.hpp"

#include <limits>

namespace wsnkm {

std::string_view to_string(BsMode m) { return m == BsMode::powerful ? "powerful" : "multihop"; }

BsMode parse_bs_mode(std::string_view name) {
  if (name == "powerful") return BsMode::powerful;
  if (name == "multihop") return BsMode::multihop;
  throw Error(ErrorKind::parse, "unknown BS mode '" + std::string(name) + "'");
}

std::string_view to_string(MsgKind k) {
  switch (k) {
    case MsgKind::ticket: return "ticket";
    case MsgKind::cycle: return "cycle";
    case MsgKind::disclosure: return "disclosure";
    case MsgKind::ack: return "ack";
    case MsgKind::revocation: return "revocation";
  }
  return "?";
}

Simulation::Simulation(SimConfig config) : cfg_(std::move(config)), rng_(cfg_.seed) {
  setup(deploy(cfg_.nodes, cfg_.side, cfg_.range, cfg_.p_loss, rng_));
}

Simulation::Simulation(SimConfig config, DeploymentGraph graph) : cfg_(std::move(config)), rng_(cfg_.seed) {
  setup(std::move(graph));
}

void Simulation::setup(DeploymentGraph graph) {
  graph_ = std::move(graph);
  std::size_t n_nodes = graph_.sensors();
  if (cfg_.cycles == 0) throw Error(ErrorKind::validation, "at least one cycle is required");
  // an i-BA message for cycle i commits to cycle i+1, so the chains run one further
  std::size_t chain = cfg_.cycles + (cfg_.variant == Variant::iba ? 1 : 0);
  std::vector<double> schedule = cfg_.schedule.empty()
                                     ? TrustCenter::uniform_schedule(chain, 0.0, cfg_.cycle_gap)
                                     : cfg_.schedule;
  if (schedule.size() < chain + 1) {
    throw Error(ErrorKind::validation, "schedule is shorter than the requested cycle count");
  }
  tc_ = std::make_unique<TrustCenter>(TrustCenter::init(schedule.size() - 1, cfg_.disclosure_delay,
                                                        schedule, rng_,
                                                        GroupParams::for_backend(cfg_.backend)));
  ledger_ = EnergyLedger(n_nodes, cfg_.costs);

  std::uniform_real_distribution<double> offset(-cfg_.max_clock_offset, cfg_.max_clock_offset);
  offsets_.resize(n_nodes);
  for (auto& o : offsets_) o = cfg_.max_clock_offset > 0 ? offset(rng_) : 0.0;

  NodeConfig nc = cfg_.node;
  nc.mode = cfg_.variant;
  nc.disclosure_delay = cfg_.disclosure_delay;
  std::size_t lifetime = cfg_.lifetime ? cfg_.lifetime : cfg_.cycles;
  nodes_.reserve(n_nodes);
  for (std::size_t id = 0; id < n_nodes; ++id) {
    auto nid = static_cast<NodeId>(id);
    nodes_.push_back(std::make_unique<SensorNode>(tc_->provision_node(nid, lifetime, rng_), nc,
                                                  local_time(nid, tc_->cycle_time(0)), &ledger_));
  }
  if (cfg_.bs_mode == BsMode::multihop) {
    bs_vertex_ = graph_.attach({graph_.side() / 2, graph_.side() / 2}, graph_.range());
  }
  radio_ = std::make_unique<Radio>(graph_, rng_, &ledger_);
  for (auto k : {MsgKind::ticket, MsgKind::cycle, MsgKind::disclosure, MsgKind::ack, MsgKind::revocation}) {
    receptions_[k].assign(n_nodes, 0);
  }
}

void Simulation::schedule_revocation(std::size_t cycle, std::vector<NodeId> ids) {
  revocations_[cycle] = std::move(ids);
}

void Simulation::schedule_cycles() {
  if (scheduled_) return;
  scheduled_ = true;
  for (std::size_t i = 1; i <= cfg_.cycles; ++i) {
    auto cycle = static_cast<CycleIndex>(i);
    double t_i = cycle_time(i);
    double ticket_at = t_i - cfg_.ticket_lead;
    events_.schedule(ticket_at, [this, cycle, ticket_at] { emit_tickets(cycle, ticket_at); });
    events_.schedule(t_i, [this, i, t_i] {
      Bytes wire = tc_->build_cycle_message(i, cfg_.variant).encode();
      air_log_.push_back({t_i, MsgKind::cycle, static_cast<CycleIndex>(i), wire});
      transmit(t_i, bs_vertex_, MsgKind::cycle, wire, Origin::honest, std::nullopt);
      if (auto r = revocations_.find(i); r != revocations_.end()) {
        Bytes rev = tc_->build_revocation(i, r->second).encode();
        air_log_.push_back({t_i, MsgKind::revocation, static_cast<CycleIndex>(i), rev});
        transmit(t_i, bs_vertex_, MsgKind::revocation, rev, Origin::honest, std::nullopt);
      }
    });
    double d_at = disclosure_time(i);
    events_.schedule(d_at, [this, i, d_at] {
      Bytes wire = tc_->build_disclosure(i, d_at).encode();
      air_log_.push_back({d_at, MsgKind::disclosure, static_cast<CycleIndex>(i), wire});
      transmit(d_at, bs_vertex_, MsgKind::disclosure, wire, Origin::honest, std::nullopt);
    });
  }
}

void Simulation::run() { run_until(std::numeric_limits<double>::infinity()); }

void Simulation::run_until(double global_time) {
  schedule_cycles();
  events_.run_until(global_time);
}

void Simulation::inject(double at, NodeId sender, MsgKind kind, Bytes wire, Origin origin,
                        std::optional<std::vector<NodeId>> listeners) {
  events_.schedule(at, [this, at, sender, kind, wire = std::move(wire), origin,
                        listeners = std::move(listeners)] { transmit(at, sender, kind, wire, origin, listeners); });
}

void Simulation::transmit(double at, NodeId sender, MsgKind kind, const Bytes& wire, Origin origin,
                      const std::optional<std::vector<NodeId>>& listeners) {
  bool bs_kind = kind == MsgKind::cycle || kind == MsgKind::disclosure || kind == MsgKind::revocation;
  if (sender < size()) {
    record(at, sender, "tx_" + std::string(to_string(kind)), wire.size(),
           double(on_air_octets(wire.size())) * cfg_.costs.tx_per_octet, "", 0, origin);
  }
  if (cfg_.bs_mode == BsMode::multihop && bs_kind && !listeners) {
    blind_flood(graph_, *radio_, sender, wire.size(), origin, [&](NodeId v, std::size_t hop) {
      return handle(v, sender, kind, wire, origin, at + double(hop) * cfg_.hop_latency);
    });
    return;
  }
  std::vector<NodeId> all;
  const std::vector<NodeId>* lst = nullptr;
  if (listeners) {
    lst = &*listeners;
  } else if (sender == kBaseStationId) {
    all.resize(size());
    for (std::size_t v = 0; v < size(); ++v) all[v] = static_cast<NodeId>(v);
    lst = &all;
  } else {
    lst = &graph_.neighbors(sender);
  }
  for (NodeId v : radio_->transmit(sender, *lst, wire.size(), origin)) {
    handle(v, sender, kind, wire, origin, at + cfg_.hop_latency);
  }
}

bool Simulation::handle(NodeId v, NodeId from, MsgKind kind, const Bytes& wire, Origin origin, double at) {
  SensorNode& n = node(v);
  double now = local_time(v, at);
  double before = cfg_.record_trace ? ledger_.node_total(v) : 0.0;
  auto spent = [&] { return cfg_.record_trace ? ledger_.node_total(v) - before : 0.0; };
  auto jammed = [&](CycleIndex c) { return origin == Origin::honest && jammed_.count({v, kind, c}) != 0; };
  std::string event = "rx_" + std::string(to_string(kind));

  try {
    switch (kind) {
      case MsgKind::ticket: {
        Ticket t = Ticket::decode(wire, n.group().public_octets());
        if (jammed(t.cycle)) return false;
        Verdict verdict = n.on_ticket(from, t, now, origin);
        record(at, v, event, wire.size(), spent(), to_string(verdict), t.cycle, origin);
        return false;
      }
      case MsgKind::cycle: {
        CycleMessage msg = CycleMessage::decode(cfg_.variant, wire);
        CycleIndex c = cfg_.variant == Variant::iba ? msg.cycle : tc_->current_cycle();
        if (jammed(c)) return false;
        if (origin == Origin::honest) ++receptions_[kind][v];
        CycleResult res = n.on_cycle_message(msg, now, origin);
        record(at, v, event, wire.size(), spent(), to_string(res.verdict), c, origin);
        if (cfg_.variant == Variant::ba) return true;  // blind flooding relays anything new
        return res.verdict == Verdict::accepted;
      }
      case MsgKind::disclosure: {
        DisclosureMessage d = DisclosureMessage::decode(wire);
        if (jammed(d.cycle)) return false;
        if (origin == Origin::honest) ++receptions_[kind][v];
        DisclosureResult res = n.on_disclosure(d, now);
        record(at, v, event, wire.size(), spent(), to_string(res.verdict), d.cycle, origin);
        for (NodeId peer : res.keys_derived) {
          record(at, v, "key_derived", 0, 0, "peer:" + std::to_string(peer), d.cycle, origin);
        }
        for (NodeId peer : res.tickets_rejected) {
          record(at, v, "ticket_rejected", 0, 0, "peer:" + std::to_string(peer), d.cycle, origin);
        }
        for (const auto& a : res.acks) {
          double ack_at = at + cfg_.ack_delay;
          events_.schedule(ack_at, [this, v, a, ack_at] { send_ack(v, a, ack_at); });
        }
        return res.verdict == Verdict::accepted;
      }
      case MsgKind::revocation: {
        RevocationMessage r = RevocationMessage::decode(wire);
        if (jammed(r.cycle)) return false;
        if (origin == Origin::honest) ++receptions_[kind][v];
        Verdict verdict = n.on_revocation(r, now, origin);
        record(at, v, event, wire.size(), spent(), to_string(verdict), r.cycle, origin);
        return verdict == Verdict::accepted;
      }
      case MsgKind::ack:
        return false;  // acks travel through send_ack
    }
  } catch (const Error&) {
    record(at, v, event, wire.size(), spent(), "malformed", 0, origin);
  }
  return false;
}

void Simulation::emit_tickets(CycleIndex cycle, double at) {
  for (std::size_t id = 0; id < size(); ++id) {
    SensorNode& n = *nodes_[id];
    if (!n.has_signature_for(cycle) || !n.wants_to_participate()) continue;
    Bytes wire = n.emit_ticket(cycle).encode();
    transmit(at, static_cast<NodeId>(id), MsgKind::ticket, wire, Origin::honest, std::nullopt);
  }
}

void Simulation::send_ack(NodeId from, const AckToSend& a, double at) {
  Bytes wire = a.ack.encode();
  record(at, from, "tx_ack", wire.size(), double(on_air_octets(wire.size())) * cfg_.costs.tx_per_octet, "",
         a.ack.cycle, Origin::honest);
  if (!radio_->unicast(from, a.to, wire.size(), Origin::honest) || a.to >= size()) return;
  ++receptions_[MsgKind::ack][a.to];
  double before = cfg_.record_trace ? ledger_.node_total(a.to) : 0.0;
  bool ok = node(a.to).on_ack(from, a.ack);
  record(at, a.to, "rx_ack", wire.size(), cfg_.record_trace ? ledger_.node_total(a.to) - before : 0.0,
         ok ? "accepted" : "rejected", a.ack.cycle, Origin::honest);
}

void Simulation::record(double at, NodeId node, std::string_view event, std::size_t bytes, double energy,
                        std::string_view verdict, CycleIndex cycle, Origin origin) {
  if (!cfg_.record_trace) return;
  trace_.append({at, node, std::string(event), bytes, energy, std::string(verdict), cycle, origin});
}

PairStats Simulation::pair_stats() const {
  PairStats s;
  for (auto [u, v] : graph_.sensor_edges()) {
    ++s.adjacent;
    auto ku = node(u).key_with(v);
    auto kv = node(v).key_with(u);
    if (ku && kv && *ku == *kv) {
      ++s.shared;
      if (node(u).link_confirmed(v) && node(v).link_confirmed(u)) ++s.confirmed;
    }
  }
  return s;
}

const std::vector<std::size_t>& Simulation::receptions(MsgKind kind) const { return receptions_.at(kind); }

}  // namespace wsnkm
