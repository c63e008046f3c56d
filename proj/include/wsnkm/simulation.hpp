#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "wsnkm/netsim.hpp"
#include "wsnkm/protocol.hpp"
#include "wsnkm/trace.hpp"
#include "wsnkm/trust_center.hpp"

namespace wsnkm {

/// How base-station traffic reaches the sensors.
///   powerful : the BS transmitter covers the whole field (still lossy)
///   multihop : the BS is a radio at the field center with range r; nodes
///              blind-flood its messages
enum class BsMode : std::uint8_t { powerful, multihop };
std::string_view to_string(BsMode m);
BsMode parse_bs_mode(std::string_view name);

enum class MsgKind : std::uint8_t { ticket, cycle, disclosure, ack, revocation };
std::string_view to_string(MsgKind k);

struct SimConfig {
  std::size_t nodes = 100;
  double side = 500;
  double range = 30;
  double p_loss = 0;
  BsMode bs_mode = BsMode::powerful;
  Variant variant = Variant::iba;
  GroupBackend backend = GroupBackend::ecc160;
  std::size_t cycles = 1;
  /// Signatures preloaded per node; 0 means one per cycle.
  std::size_t lifetime = 0;
  double disclosure_delay = 300;
  double cycle_gap = 900;
  /// Explicit T_BS0..T_BSn; overrides cycle_gap when non-empty.
  std::vector<double> schedule;
  /// Tickets go out this long before each cycle message.
  double ticket_lead = 10;
  /// Acks go out this long after a disclosure.
  double ack_delay = 1;
  double hop_latency = 0;
  /// Per-node clock offsets are uniform on [-max, max] seconds.
  double max_clock_offset = 5;
  NodeConfig node;
  CostTable costs = CostTable::calibrated();
  std::uint64_t seed = 1;
  bool record_trace = false;
};

/// Adjacent sensor pairs and how many of them ended up with a key.
struct PairStats {
  std::size_t adjacent = 0;
  std::size_t shared = 0;     // both ends hold the same K_AB
  std::size_t confirmed = 0;  // ... and both acks verified
  double shared_fraction() const { return adjacent ? double(shared) / double(adjacent) : 1.0; }
  double confirmed_fraction() const { return adjacent ? double(confirmed) / double(adjacent) : 1.0; }
};

/// One BS transmission as it went on the air; what an eavesdropper records.
struct AirRecord {
  double time = 0;
  MsgKind kind = MsgKind::cycle;
  CycleIndex cycle = 0;
  Bytes wire;
};

/// One replica: deployment, trust center, sensor nodes and the event loop.
class Simulation {
 public:
  explicit Simulation(SimConfig config);
  Simulation(SimConfig config, DeploymentGraph graph);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  const SimConfig& config() const { return cfg_; }
  const DeploymentGraph& graph() const { return graph_; }
  TrustCenter& trust_center() { return *tc_; }
  std::size_t size() const { return nodes_.size(); }
  SensorNode& node(NodeId id) { return *nodes_.at(id); }
  const SensorNode& node(NodeId id) const { return *nodes_.at(id); }
  EnergyLedger& ledger() { return ledger_; }
  const TraceLog& trace() const { return trace_; }
  Rng& rng() { return rng_; }
  EventQueue& events() { return events_; }
  const std::vector<AirRecord>& air_log() const { return air_log_; }

  /// Global time of T_BSi.
  double cycle_time(std::size_t i) const { return tc_->cycle_time(i); }
  double disclosure_time(std::size_t i) const { return cycle_time(i) + cfg_.disclosure_delay; }
  double local_time(NodeId id, double global) const { return global + offsets_.at(id); }
  /// Vertex of the BS radio (multihop) or kBaseStationId (powerful).
  NodeId bs_vertex() const { return bs_vertex_; }

  /// Schedules every protocol cycle (once) and runs the event loop dry.
  void run();
  void run_until(double global_time);

  /// Adds a radio (adversary) at `where`; returns its vertex.
  NodeId attach_radio(Point where, double range) { return graph_.attach(where, range); }

  /// Schedules a transmission of raw `wire` octets from `sender` at global
  /// time `at`. Listeners default to the sender's neighbors; BS-style kinds
  /// are relayed onward in multihop mode according to each node's verdict.
  void inject(double at, NodeId sender, MsgKind kind, Bytes wire, Origin origin,
              std::optional<std::vector<NodeId>> listeners = std::nullopt);

  /// Same as inject, but transmits immediately (for use inside scheduled events).
  void transmit(double at, NodeId sender, MsgKind kind, const Bytes& wire, Origin origin,
                const std::optional<std::vector<NodeId>>& listeners = std::nullopt);

  /// The target silently misses every honest `kind` message of `cycle`.
  void jam(NodeId target, MsgKind kind, CycleIndex cycle) { jammed_.insert({target, kind, cycle}); }

  /// BS broadcasts a revocation list together with cycle i's message.
  void schedule_revocation(std::size_t cycle, std::vector<NodeId> ids);

  PairStats pair_stats() const;
  /// Honest BS messages of `kind` each node fully received.
  const std::vector<std::size_t>& receptions(MsgKind kind) const;

 private:
  void setup(DeploymentGraph graph);
  void schedule_cycles();
  /// Hands a received message to node v; returns whether v relays it.
  bool handle(NodeId v, NodeId from, MsgKind kind, const Bytes& wire, Origin origin, double at);
  void emit_tickets(CycleIndex cycle, double at);
  void send_ack(NodeId from, const AckToSend& a, double at);
  void record(double at, NodeId node, std::string_view event, std::size_t bytes, double energy,
              std::string_view verdict, CycleIndex cycle, Origin origin);

  SimConfig cfg_;
  Rng rng_;
  DeploymentGraph graph_;
  std::unique_ptr<TrustCenter> tc_;
  EnergyLedger ledger_;
  std::vector<std::unique_ptr<SensorNode>> nodes_;
  std::vector<double> offsets_;
  std::unique_ptr<Radio> radio_;
  EventQueue events_;
  TraceLog trace_;
  std::vector<AirRecord> air_log_;
  NodeId bs_vertex_ = kBaseStationId;
  bool scheduled_ = false;
  std::set<std::tuple<NodeId, MsgKind, CycleIndex>> jammed_;
  std::map<MsgKind, std::vector<std::size_t>> receptions_;
  std::map<std::size_t, std::vector<NodeId>> revocations_;
};

}  // namespace wsnkm
