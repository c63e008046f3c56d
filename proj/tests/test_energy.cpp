#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "wsnkm/config.hpp"
#include "wsnkm/energy.hpp"

using namespace wsnkm;

namespace {

template <typename F>
ErrorKind error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no exception";
  return ErrorKind::io;
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

const char* kMinimalTable =
    "tx_per_octet = 1\nrx_per_octet = 2\nsha1 = 3\naes = 4\nhmac = 5\necdh = 6\ncert = 7\nbloom = 8\n";

}  // namespace

TEST(KeyValue, CommentsWhitespaceAndLists) {
  auto kv = KeyValueFile::parse("# header\n  a = 1.5  # trailing\n\nlist = 1, 2 ,3\nname=iba\n");
  EXPECT_EQ(kv.get_double("a"), 1.5);
  EXPECT_EQ(kv.get("name"), "iba");
  EXPECT_EQ(kv.get_double_list("list"), (std::vector<double>{1, 2, 3}));
  EXPECT_FALSE(kv.has("missing"));
  EXPECT_FALSE(kv.get_double("missing").has_value());
}

TEST(KeyValue, Errors) {
  EXPECT_EQ(error_of([] { KeyValueFile::parse("novalue\n"); }), ErrorKind::parse);
  EXPECT_EQ(error_of([] { KeyValueFile::parse(" = 3\n"); }), ErrorKind::parse);
  EXPECT_EQ(error_of([] { KeyValueFile::parse("a = 1\na = 2\n"); }), ErrorKind::parse);
  EXPECT_EQ(error_of([] { KeyValueFile::parse("a = x\n").get_double("a"); }), ErrorKind::parse);
  EXPECT_EQ(error_of([] { KeyValueFile::parse("a = -1\n").get_u64("a"); }), ErrorKind::parse);
  EXPECT_EQ(error_of([] { KeyValueFile::parse("a = 1,,2\n").get_double_list("a"); }), ErrorKind::parse);
  EXPECT_EQ(error_of([] { KeyValueFile::load("/nonexistent/file.cfg"); }), ErrorKind::io);
  EXPECT_EQ(error_of([] { parse_double("1.5x", "v"); }), ErrorKind::parse);
  EXPECT_EQ(parse_u64("42", "v"), 42u);
}

TEST(CostTable, CalibratedValues) {
  auto c = CostTable::calibrated();
  EXPECT_DOUBLE_EQ(c.tx_per_octet, 0.0592);
  EXPECT_DOUBLE_EQ(c.rx_per_octet, 0.0286);
  EXPECT_DOUBLE_EQ(c.cost(Op::sha1), 0.1);
  EXPECT_DOUBLE_EQ(c.cost(Op::hmac), 0.2);
  EXPECT_DOUBLE_EQ(c.cost(Op::ecdh), 48.8272);
  EXPECT_DOUBLE_EQ(c.scheme_octets.at("iba").rx, 204);
  EXPECT_DOUBLE_EQ(c.scheme_octets.at("ba").rx, 152);
}

TEST(CostTable, LoadErrors) {
  auto missing = write_temp("wsnkm_cost_missing.cfg", "tx_per_octet = 1\n");
  EXPECT_EQ(error_of([&] { CostTable::load(missing); }), ErrorKind::parse);
  auto negative = write_temp("wsnkm_cost_negative.cfg", std::string(kMinimalTable) + "");
  {
    std::ofstream(negative) << "tx_per_octet = -1\nrx_per_octet = 2\nsha1 = 3\naes = 4\nhmac = 5\necdh = 6\n"
                               "cert = 7\nbloom = 8\n";
  }
  EXPECT_EQ(error_of([&] { CostTable::load(negative); }), ErrorKind::accounting);
  auto unknown = write_temp("wsnkm_cost_unknown.cfg", std::string(kMinimalTable) + "ba.foo = 3\n");
  EXPECT_EQ(error_of([&] { CostTable::load(unknown); }), ErrorKind::parse);
  auto ok = write_temp("wsnkm_cost_ok.cfg", std::string(kMinimalTable) + "ba.tx_octets = 10\n");
  auto t = CostTable::load(ok);
  EXPECT_EQ(t.cost(Op::bloom), 8);
  EXPECT_EQ(t.scheme_octets.at("ba").tx, 10);
  for (auto p : {missing, negative, unknown, ok}) std::filesystem::remove(p);
}

TEST(Ledger, ChargesByCategoryAndOrigin) {
  EnergyLedger l(3, CostTable::calibrated());
  l.charge_op(0, Op::sha1);
  l.charge_op(0, Op::ecdh);
  l.charge_tx(1, 41);
  l.charge_rx(1, 41, Origin::adversary);
  l.charge_tx(2, 41, Origin::adversary);
  EXPECT_DOUBLE_EQ(l.node_category(0, Category::hash), 0.1);
  EXPECT_DOUBLE_EQ(l.node_category(0, Category::dh), 48.8272);
  EXPECT_DOUBLE_EQ(l.node_total(1), 41 * (0.0592 + 0.0286));
  EXPECT_DOUBLE_EQ(l.node_adversary_induced(1), 41 * 0.0286);
  EXPECT_DOUBLE_EQ(l.network_adversary_retransmission(), 41 * 0.0592);
  EXPECT_DOUBLE_EQ(l.network_adversary_induced(), 41 * (0.0592 + 0.0286));
  EXPECT_DOUBLE_EQ(l.network_category(Category::tx), 2 * 41 * 0.0592);
}

TEST(Ledger, NetworkTotalIsSumOfNodes) {
  EnergyLedger l(10, CostTable::calibrated());
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    auto node = static_cast<NodeId>(rng() % 10);
    l.charge_op(node, static_cast<Op>(rng() % 6), rng() % 2 ? Origin::honest : Origin::adversary);
  }
  double sum = 0, by_cat = 0;
  for (NodeId n = 0; n < 10; ++n) sum += l.node_total(n);
  for (std::size_t c = 0; c < kCategoryCount; ++c) by_cat += l.network_category(static_cast<Category>(c));
  EXPECT_NEAR(l.network_total(), sum, 1e-9);
  EXPECT_NEAR(l.network_total(), by_cat, 1e-9);
  EXPECT_LE(l.network_adversary_induced(), l.network_total());
}

TEST(Ledger, Errors) {
  EnergyLedger l(2, CostTable::calibrated());
  EXPECT_EQ(error_of([&] { l.charge_op(2, Op::sha1); }), ErrorKind::accounting);
  EXPECT_EQ(error_of([&] { l.charge(0, Category::other, -1.0); }), ErrorKind::accounting);
}
