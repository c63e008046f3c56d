#include "wsnkm/energy.hpp"

#include <numeric>

#include "wsnkm/config.hpp"

namespace wsnkm {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::tx: return "tx";
    case Category::rx: return "rx";
    case Category::hash: return "hash";
    case Category::mac: return "mac";
    case Category::cipher: return "cipher";
    case Category::dh: return "dh";
    case Category::other: return "other";
  }
  return "?";
}

std::string_view to_string(Op op) {
  switch (op) {
    case Op::sha1: return "sha1";
    case Op::aes: return "aes";
    case Op::hmac: return "hmac";
    case Op::ecdh: return "ecdh";
    case Op::cert: return "cert";
    case Op::bloom: return "bloom";
  }
  return "?";
}

Category category_of(Op op) {
  switch (op) {
    case Op::sha1: return Category::hash;
    case Op::aes: return Category::cipher;
    case Op::hmac: return Category::mac;
    case Op::ecdh: return Category::dh;
    case Op::cert:
    case Op::bloom: return Category::other;
  }
  return Category::other;
}

double CostTable::cost(Op op) const {
  switch (op) {
    case Op::sha1: return sha1;
    case Op::aes: return aes;
    case Op::hmac: return hmac;
    case Op::ecdh: return ecdh;
    case Op::cert: return cert;
    case Op::bloom: return bloom;
  }
  return 0;
}

CostTable CostTable::load(const std::filesystem::path& path) {
  auto kv = KeyValueFile::load(path);
  CostTable t;
  auto field = [&](const char* key, double& dst) {
    auto v = kv.get_double(key);
    if (!v) throw Error(ErrorKind::parse, std::string("cost table is missing ") + key);
    if (*v < 0) throw Error(ErrorKind::accounting, std::string("negative cost for ") + key);
    dst = *v;
  };
  field("tx_per_octet", t.tx_per_octet);
  field("rx_per_octet", t.rx_per_octet);
  field("sha1", t.sha1);
  field("aes", t.aes);
  field("hmac", t.hmac);
  field("ecdh", t.ecdh);
  field("cert", t.cert);
  field("bloom", t.bloom);
  for (const auto& [key, value] : kv.entries()) {
    auto dot = key.find('.');
    if (dot == std::string::npos) continue;
    std::string scheme = key.substr(0, dot);
    std::string what = key.substr(dot + 1);
    double v = parse_double(value, key);
    if (what == "tx_octets") {
      t.scheme_octets[scheme].tx = v;
    } else if (what == "rx_octets") {
      t.scheme_octets[scheme].rx = v;
    } else {
      throw Error(ErrorKind::parse, "unknown cost table key " + key);
    }
  }
  return t;
}

std::filesystem::path CostTable::default_path() {
  return std::filesystem::path(WSNKM_DATA_DIR) / "cost_table.cfg";
}

CostTable CostTable::calibrated() { return load(default_path()); }

EnergyLedger::Row& EnergyLedger::row(NodeId node) {
  if (node >= rows_.size()) throw Error(ErrorKind::accounting, "charge to unknown node");
  return rows_[node];
}

void EnergyLedger::charge(NodeId node, Category category, double mj, Origin origin) {
  if (!(mj >= 0)) throw Error(ErrorKind::accounting, "negative energy charge");
  Row& r = row(node);
  r.by_category[static_cast<std::size_t>(category)] += mj;
  r.total += mj;
  if (origin == Origin::adversary) {
    r.adversary += mj;
    if (category == Category::tx) r.adversary_tx += mj;
  }
}

void EnergyLedger::charge_op(NodeId node, Op op, Origin origin) {
  charge(node, category_of(op), costs_.cost(op), origin);
}

void EnergyLedger::charge_tx(NodeId node, std::size_t octets, Origin origin) {
  charge(node, Category::tx, static_cast<double>(octets) * costs_.tx_per_octet, origin);
}

void EnergyLedger::charge_rx(NodeId node, std::size_t octets, Origin origin) {
  charge(node, Category::rx, static_cast<double>(octets) * costs_.rx_per_octet, origin);
}

double EnergyLedger::node_total(NodeId node) const { return rows_.at(node).total; }

double EnergyLedger::node_category(NodeId node, Category c) const {
  return rows_.at(node).by_category[static_cast<std::size_t>(c)];
}

double EnergyLedger::node_adversary_induced(NodeId node) const { return rows_.at(node).adversary; }

double EnergyLedger::network_total() const {
  return std::accumulate(rows_.begin(), rows_.end(), 0.0,
                         [](double s, const Row& r) { return s + r.total; });
}

double EnergyLedger::network_category(Category c) const {
  return std::accumulate(rows_.begin(), rows_.end(), 0.0, [c](double s, const Row& r) {
    return s + r.by_category[static_cast<std::size_t>(c)];
  });
}

double EnergyLedger::network_adversary_induced() const {
  return std::accumulate(rows_.begin(), rows_.end(), 0.0,
                         [](double s, const Row& r) { return s + r.adversary; });
}

double EnergyLedger::network_adversary_retransmission() const {
  return std::accumulate(rows_.begin(), rows_.end(), 0.0,
                         [](double s, const Row& r) { return s + r.adversary_tx; });
}

}  // namespace wsnkm
