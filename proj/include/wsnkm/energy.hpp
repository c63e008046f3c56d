#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wsnkm/types.hpp"

namespace wsnkm {

enum class Category : std::uint8_t { tx, rx, hash, mac, cipher, dh, other };
inline constexpr std::size_t kCategoryCount = 7;
std::string_view to_string(Category c);

/// Primitive operations priced by the cost table.
enum class Op : std::uint8_t { sha1, aes, hmac, ecdh, cert, bloom };
Category category_of(Op op);
std::string_view to_string(Op op);

/// Whose traffic caused an energy expense. Ground-truth bookkeeping only;
/// protocol logic never reads it.
enum class Origin : std::uint8_t { honest, adversary };

/// Per-handshake message volume of a scheme (on-air octets, one node).
struct SchemeOctets {
  double tx = 0;
  double rx = 0;
};

/// Millijoule prices. Loaded from a key = value file (see data/cost_table.cfg).
struct CostTable {
  double tx_per_octet = 0;
  double rx_per_octet = 0;
  double sha1 = 0;
  double aes = 0;
  double hmac = 0;
  double ecdh = 0;
  double cert = 0;
  double bloom = 0;
  std::map<std::string, SchemeOctets> scheme_octets;

  double cost(Op op) const;

  /// Throws Error{parse} / Error{io}; Error{accounting} for negative entries.
  static CostTable load(const std::filesystem::path& path);
  /// data/cost_table.cfg from the source tree.
  static CostTable calibrated();
  static std::filesystem::path default_path();
};

/// Per-node energy accumulators itemized by category, plus the share of each
/// node's spend induced by adversary-origin traffic.
class EnergyLedger {
 public:
  EnergyLedger() = default;
  EnergyLedger(std::size_t nodes, CostTable costs) : costs_(std::move(costs)), rows_(nodes) {}

  const CostTable& costs() const { return costs_; }
  std::size_t nodes() const { return rows_.size(); }

  /// Throws Error{accounting} on a negative amount or unknown node.
  void charge(NodeId node, Category category, double mj, Origin origin = Origin::honest);
  void charge_op(NodeId node, Op op, Origin origin = Origin::honest);
  void charge_tx(NodeId node, std::size_t octets, Origin origin = Origin::honest);
  void charge_rx(NodeId node, std::size_t octets, Origin origin = Origin::honest);

  double node_total(NodeId node) const;
  double node_category(NodeId node, Category c) const;
  double node_adversary_induced(NodeId node) const;
  double network_total() const;
  double network_category(Category c) const;
  double network_adversary_induced() const;
  /// tx energy spent by honest nodes relaying adversary-origin packets.
  double network_adversary_retransmission() const;

 private:
  struct Row {
    std::array<double, kCategoryCount> by_category{};
    double total = 0;
    double adversary = 0;
    double adversary_tx = 0;
  };
  Row& row(NodeId node);

  CostTable costs_;
  std::vector<Row> rows_;
};

}  // namespace wsnkm
