#pragma once

#include <functional>
#include <optional>
#include <queue>
#include <vector>

#include "wsnkm/dh_group.hpp"
#include "wsnkm/energy.hpp"
#include "wsnkm/types.hpp"

namespace wsnkm {

struct Point {
  double x = 0;
  double y = 0;
};

double distance(Point a, Point b);

/// Sensor field. Vertices 0..sensors()-1 are sensor nodes; extra vertices
/// (base station, adversary radios) may be attached afterwards and are never
/// charged energy.
class DeploymentGraph {
 public:
  DeploymentGraph() = default;
  DeploymentGraph(double side, double range, double p_loss, std::vector<Point> positions);

  double side() const { return side_; }
  double range() const { return range_; }
  double p_loss() const { return p_loss_; }
  std::size_t sensors() const { return sensors_; }
  std::size_t vertices() const { return positions_.size(); }
  Point position(std::size_t v) const { return positions_.at(v); }
  const std::vector<NodeId>& neighbors(std::size_t v) const { return adjacency_.at(v); }
  bool adjacent(std::size_t u, std::size_t v) const;

  /// Adds a radio at `where` with transmission range `range`. Links are
  /// symmetric and only to sensor vertices. Returns the new vertex id.
  NodeId attach(Point where, double range);

  /// Unordered adjacent sensor pairs (u < v).
  std::vector<std::pair<NodeId, NodeId>> sensor_edges() const;
  double mean_sensor_degree() const;
  /// Sensor vertices reachable from v over sensor links (v included).
  std::vector<bool> reachable_from(std::size_t v) const;

 private:
  double side_ = 0;
  double range_ = 0;
  double p_loss_ = 0;
  std::size_t sensors_ = 0;
  std::vector<Point> positions_;
  std::vector<std::vector<NodeId>> adjacency_;
};

/// N points i.i.d. uniform in [0,a]^2, linked when at most r apart.
/// Throws Error{invalid_params} when N == 0, a <= 0, r < 0 or p_loss outside [0,1].
DeploymentGraph deploy(std::size_t n, double side, double range, double p_loss, Rng& rng);

inline constexpr std::size_t kPayloadOctets = 32;
inline constexpr std::size_t kHeaderOctets = 9;
inline constexpr std::size_t kPacketOctets = kPayloadOctets + kHeaderOctets;

/// Header (9 octets): source(2) | flood id prefix(4) | index(1) | count(1) | length(1).
/// The full flood id travels with the packet as simulator metadata.
struct Packet {
  NodeId source = 0;
  Digest flood_id;
  std::uint8_t index = 0;
  std::uint8_t count = 0;
  Bytes payload;

  std::size_t wire_octets() const { return payload.size() + kHeaderOctets; }
};

std::size_t packet_count(std::size_t message_octets);
/// Payload plus one header per packet.
std::size_t on_air_octets(std::size_t message_octets);

/// Flood id of a message: hash of its octets.
Digest flood_id(ByteView message);
std::vector<Packet> fragment(ByteView message, NodeId source);
/// nullopt when packets are missing, duplicated or belong to different messages.
std::optional<Bytes> reassemble(std::vector<Packet> packets);

/// Lossy radio over a deployment graph. Loss is independent per packet per
/// receiver; a message is delivered iff every fragment arrives. Senders pay
/// tx per on-air octet, receivers pay rx per received packet. Vertices outside
/// the ledger (BS, adversary) are never charged.
class Radio {
 public:
  Radio(const DeploymentGraph& graph, Rng& rng, EnergyLedger* ledger = nullptr)
      : graph_(&graph), rng_(&rng), ledger_(ledger) {}

  /// Transmits once and returns the listeners that got the whole message.
  std::vector<NodeId> transmit(NodeId sender, const std::vector<NodeId>& listeners,
                               std::size_t message_octets, Origin origin);
  std::vector<NodeId> broadcast(NodeId sender, std::size_t message_octets, Origin origin) {
    return transmit(sender, graph_->neighbors(sender), message_octets, origin);
  }
  bool unicast(NodeId sender, NodeId receiver, std::size_t message_octets, Origin origin);

  /// Receive side only: whether `receiver` got all packets (rx charged per packet).
  bool receive(NodeId receiver, std::size_t message_octets, Origin origin);
  void charge_tx(NodeId sender, std::size_t message_octets, Origin origin);

 private:
  bool charged(NodeId v) const { return ledger_ && v < ledger_->nodes(); }

  const DeploymentGraph* graph_;
  Rng* rng_;
  EnergyLedger* ledger_;
};

/// Outcome of flooding one message.
struct FloodTrace {
  std::vector<bool> received;        // per vertex: got at least one full copy
  std::vector<bool> retransmitted;   // per vertex
  std::size_t transmissions = 0;     // including the origin's
  std::size_t retransmissions = 0;   // sensor relays only
};

/// Blind flooding with duplicate suppression by flood id: each vertex handles
/// the first full copy it receives and relays it at most once, if `relay`
/// says so. Breadth-first; `relay` also gets the hop count of that copy so
/// callers can apply a per-hop latency.
FloodTrace blind_flood(const DeploymentGraph& graph, Radio& radio, NodeId origin,
                       std::size_t message_octets, Origin who,
                       const std::function<bool(NodeId, std::size_t)>& relay);

/// Min-time event queue; ties run in scheduling order.
class EventQueue {
 public:
  using Action = std::function<void()>;

  void schedule(double at, Action action);
  bool empty() const { return heap_.empty(); }
  double now() const { return now_; }
  /// Runs events with time <= until (all events if until is +inf).
  void run_until(double until);
  std::size_t processed() const { return processed_; }

 private:
  struct Entry {
    double at;
    std::uint64_t seq;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  std::uint64_t seq_ = 0;
  double now_ = 0;
  std::size_t processed_ = 0;
};

}  // namespace wsnkm
