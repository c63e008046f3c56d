#include "wsnkm/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "wsnkm/crypto.hpp"

namespace wsnkm {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

DeploymentGraph::DeploymentGraph(double side, double range, double p_loss, std::vector<Point> positions)
    : side_(side), range_(range), p_loss_(p_loss), sensors_(positions.size()),
      positions_(std::move(positions)), adjacency_(sensors_) {
  for (std::size_t u = 0; u < sensors_; ++u) {
    for (std::size_t v = u + 1; v < sensors_; ++v) {
      if (distance(positions_[u], positions_[v]) <= range_) {
        adjacency_[u].push_back(static_cast<NodeId>(v));
        adjacency_[v].push_back(static_cast<NodeId>(u));
      }
    }
  }
}

bool DeploymentGraph::adjacent(std::size_t u, std::size_t v) const {
  const auto& n = adjacency_.at(u);
  return std::binary_search(n.begin(), n.end(), static_cast<NodeId>(v));
}

NodeId DeploymentGraph::attach(Point where, double range) {
  auto id = static_cast<NodeId>(positions_.size());
  positions_.push_back(where);
  adjacency_.emplace_back();
  for (std::size_t v = 0; v < sensors_; ++v) {
    if (distance(where, positions_[v]) <= range) {
      adjacency_.back().push_back(static_cast<NodeId>(v));
      adjacency_[v].push_back(id);  // stays sorted: id exceeds every existing vertex
    }
  }
  return id;
}

std::vector<std::pair<NodeId, NodeId>> DeploymentGraph::sensor_edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (std::size_t u = 0; u < sensors_; ++u) {
    for (NodeId v : adjacency_[u]) {
      if (v > u && v < sensors_) out.emplace_back(static_cast<NodeId>(u), v);
    }
  }
  return out;
}

double DeploymentGraph::mean_sensor_degree() const {
  if (sensors_ == 0) return 0;
  return 2.0 * static_cast<double>(sensor_edges().size()) / static_cast<double>(sensors_);
}

std::vector<bool> DeploymentGraph::reachable_from(std::size_t v) const {
  std::vector<bool> seen(vertices(), false);
  std::deque<std::size_t> todo{v};
  seen[v] = true;
  while (!todo.empty()) {
    auto u = todo.front();
    todo.pop_front();
    // only sensors relay; other radios are sources
    if (u != v && u >= sensors_) continue;
    for (NodeId w : adjacency_[u]) {
      if (!seen[w]) {
        seen[w] = true;
        todo.push_back(w);
      }
    }
  }
  return seen;
}

DeploymentGraph deploy(std::size_t n, double side, double range, double p_loss, Rng& rng) {
  if (n == 0 || n >= kAdversaryId) throw Error(ErrorKind::invalid_params, "node count out of range");
  if (!(side > 0)) throw Error(ErrorKind::invalid_params, "field side must be positive");
  if (!(range >= 0)) throw Error(ErrorKind::invalid_params, "range must be non-negative");
  if (!(p_loss >= 0 && p_loss <= 1)) throw Error(ErrorKind::invalid_params, "p_loss outside [0,1]");
  std::uniform_real_distribution<double> u(0.0, side);
  std::vector<Point> pts(n);
  for (auto& p : pts) {
    p.x = u(rng);
    p.y = u(rng);
  }
  return DeploymentGraph(side, range, p_loss, std::move(pts));
}

std::size_t packet_count(std::size_t message_octets) {
  return (message_octets + kPayloadOctets - 1) / kPayloadOctets;
}

std::size_t on_air_octets(std::size_t message_octets) {
  return message_octets + kHeaderOctets * packet_count(message_octets);
}

Digest flood_id(ByteView message) { return crypto::hash(message); }

std::vector<Packet> fragment(ByteView message, NodeId source) {
  std::size_t count = packet_count(message.size());
  if (count > 255) throw Error(ErrorKind::invalid_length, "message too long to fragment");
  Digest id = flood_id(message);
  std::vector<Packet> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t from = i * kPayloadOctets;
    std::size_t len = std::min(kPayloadOctets, message.size() - from);
    auto chunk = message.subspan(from, len);
    out.push_back({source, id, static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(count),
                   Bytes(chunk.begin(), chunk.end())});
  }
  return out;
}

std::optional<Bytes> reassemble(std::vector<Packet> packets) {
  if (packets.empty()) return Bytes{};
  std::sort(packets.begin(), packets.end(),
            [](const Packet& a, const Packet& b) { return a.index < b.index; });
  const auto& first = packets.front();
  if (packets.size() != first.count) return std::nullopt;
  Bytes out;
  for (std::size_t i = 0; i < packets.size(); ++i) {
    const auto& p = packets[i];
    if (p.index != i || p.count != first.count || p.flood_id != first.flood_id) return std::nullopt;
    append(out, p.payload);
  }
  if (flood_id(out) != first.flood_id) return std::nullopt;
  return out;
}

void Radio::charge_tx(NodeId sender, std::size_t message_octets, Origin origin) {
  if (charged(sender)) ledger_->charge_tx(sender, on_air_octets(message_octets), origin);
}

bool Radio::receive(NodeId receiver, std::size_t message_octets, Origin origin) {
  std::bernoulli_distribution lost(graph_->p_loss());
  std::size_t remaining = message_octets;
  bool all = true;
  for (std::size_t i = 0, n = packet_count(message_octets); i < n; ++i) {
    std::size_t payload = std::min(kPayloadOctets, remaining);
    remaining -= payload;
    if (lost(*rng_)) {
      all = false;
      continue;
    }
    if (charged(receiver)) ledger_->charge_rx(receiver, payload + kHeaderOctets, origin);
  }
  return all;
}

std::vector<NodeId> Radio::transmit(NodeId sender, const std::vector<NodeId>& listeners,
                                    std::size_t message_octets, Origin origin) {
  charge_tx(sender, message_octets, origin);
  std::vector<NodeId> got;
  for (NodeId v : listeners) {
    if (v == sender || v >= graph_->sensors()) continue;
    if (receive(v, message_octets, origin)) got.push_back(v);
  }
  return got;
}

bool Radio::unicast(NodeId sender, NodeId receiver, std::size_t message_octets, Origin origin) {
  charge_tx(sender, message_octets, origin);
  return receive(receiver, message_octets, origin);
}

FloodTrace blind_flood(const DeploymentGraph& graph, Radio& radio, NodeId origin,
                       std::size_t message_octets, Origin who,
                       const std::function<bool(NodeId, std::size_t)>& relay) {
  FloodTrace t;
  t.received.assign(graph.vertices(), false);
  t.retransmitted.assign(graph.vertices(), false);
  t.received[origin] = true;
  std::deque<std::pair<NodeId, std::size_t>> senders{{origin, 0}};
  while (!senders.empty()) {
    auto [s, hop] = senders.front();
    senders.pop_front();
    ++t.transmissions;
    if (s != origin) {
      t.retransmitted[s] = true;
      ++t.retransmissions;
    }
    for (NodeId v : radio.broadcast(s, message_octets, who)) {
      if (t.received[v]) continue;  // duplicate flood id
      t.received[v] = true;
      if (relay(v, hop + 1)) senders.emplace_back(v, hop + 1);
    }
  }
  return t;
}

void EventQueue::schedule(double at, Action action) {
  heap_.push({at, seq_++, std::move(action)});
}

void EventQueue::run_until(double until) {
  while (!heap_.empty() && heap_.top().at <= until) {
    Entry e = heap_.top();
    heap_.pop();
    now_ = e.at;
    ++processed_;
    e.action();
  }
  if (until != std::numeric_limits<double>::infinity() && until > now_) now_ = until;
}

}  // namespace wsnkm
