#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wsnkm/analytics.hpp"

using namespace wsnkm;
using namespace wsnkm::analytics;

namespace {

constexpr double kPi = 3.14159265358979323846;

// largest root of x = 1 - p^(k x) by bisection on a bracket that excludes 0
double bisect_pr(double k, double p) {
  auto g = [&](double x) { return x - (1 - std::pow(p, k * x)); };
  double lo = 1e-6, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (g(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// P(|U - V| <= z) for U, V uniform in the unit square, z <= 1
double line_picking_cdf(double z) { return kPi * z * z - 8.0 * z * z * z / 3.0 + z * z * z * z / 2.0; }

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

}  // namespace

TEST(SolvePr, BoundaryCases) {
  EXPECT_EQ(solve_pr(5, 0), 1.0);
  EXPECT_EQ(solve_pr(5, 1), 0.0);
  EXPECT_EQ(solve_pr(0, 0.3), 0.0);
}

TEST(SolvePr, MatchesBisection) {
  EXPECT_NEAR(solve_pr(10, 0.5), bisect_pr(10, 0.5), 1e-10);
  for (double k : {2.0, 5.0, 8.0, 20.0}) {
    for (double p : {0.05, 0.2, 0.4}) {
      if (k * std::log(1 / p) <= 1.05) continue;  // no nonzero root / too close to critical
      EXPECT_NEAR(solve_pr(k, p), bisect_pr(k, p), 1e-9) << k << " " << p;
    }
  }
}

TEST(SolvePr, ResidualAndMonotonicityOnAGrid) {
  double prev_k_row = -1;
  for (double k = 0.5; k <= 30; k += 0.5) {
    double prev = 2;
    for (double p = 0; p <= 1.0001; p += 0.05) {
      auto fp = solve_pr_detail(k, std::min(p, 1.0));
      EXPECT_LT(fp.residual, 1e-12) << k << " " << p;
      EXPECT_LE(fp.value, prev + 1e-12);
      prev = fp.value;
    }
    double at = solve_pr(k, 0.3);
    EXPECT_GE(at, prev_k_row - 1e-12);
    prev_k_row = at;
  }
}

TEST(SolvePr, Errors) {
  EXPECT_EQ(error_of([] { solve_pr(-1, 0.1); }), ErrorKind::out_of_model);
  EXPECT_EQ(error_of([] { solve_pr(1, 1.1); }), ErrorKind::out_of_model);
}

TEST(Coverage, InteriorEdgeAndCorner) {
  const double a = 500, r = 30, z = r / a;
  EXPECT_NEAR(coverage_fraction(250, 250, a, r) / interior_fraction(z), 1.0, 1e-9);
  EXPECT_NEAR(coverage_fraction(0, 250, a, r) / interior_fraction(z), 0.5, 1e-9);
  EXPECT_NEAR(coverage_fraction(500, 0, a, r) / interior_fraction(z), 0.25, 1e-9);
  EXPECT_EQ(coverage_fraction(10, 10, a, 0), 0.0);
  // the whole field when the disc covers it
  EXPECT_NEAR(coverage_fraction(0, 0, 1, 2), 1.0, 1e-12);
}

TEST(Coverage, MatchesMonteCarloAtAnEdgePoint) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 100);
  const double x = 10, y = 95, r = 20;
  int in = 0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) in += std::hypot(u(rng) - x, u(rng) - y) <= r;
  double p = coverage_fraction(x, y, 100, r);
  EXPECT_NEAR(double(in) / n, p, 4 * std::sqrt(p * (1 - p) / n));
}

TEST(Coverage, MeanMatchesLinePickingDistribution) {
  for (double z : {0.01, 0.06, 0.2, 0.5, 0.9, 1.0}) {
    EXPECT_NEAR(mean_coverage_fraction(1.0, z), line_picking_cdf(z), 1e-9) << z;
    EXPECT_NEAR(mean_coverage_fraction(500.0, 500.0 * z), line_picking_cdf(z), 1e-9) << z;
  }
}

TEST(ExpectedDegree, RegionsAndErrors) {
  EXPECT_NEAR(expected_degree(500, 500, 30), 499 * line_picking_cdf(0.06), 1e-7);
  EXPECT_EQ(expected_degree(10, 1, 2), 9.0);
  EXPECT_EQ(expected_degree(1, 500, 30), 0.0);
  EXPECT_EQ(error_of([] { expected_degree(10, 1, 1.2); }), ErrorKind::out_of_model);
  EXPECT_EQ(error_of([] { expected_degree(10, 0, 1); }), ErrorKind::out_of_model);
}

TEST(PShare, Values) {
  EXPECT_NEAR(p_share(3, 0.9), 1 - std::pow(1 - std::pow(0.9, 4), 3), 1e-15);
  EXPECT_NEAR(p_share(3, 0.9), 0.95933, 5e-6);
  EXPECT_EQ(p_share(0, 0.9), 0.0);
  EXPECT_EQ(p_share(4, 1.0), 1.0);
  EXPECT_EQ(p_share(4, 0.0), 0.0);
  for (std::size_t m = 1; m < 10; ++m) EXPECT_GT(p_share(m + 1, 0.8), p_share(m, 0.8));
  EXPECT_EQ(error_of([] { p_share(1, -0.1); }), ErrorKind::out_of_model);
}

TEST(SchemeEnergy, TableValues) {
  auto c = CostTable::calibrated();
  EXPECT_NEAR(scheme_energy(c, Scheme::certificate), 187.60, 0.01);
  EXPECT_NEAR(scheme_energy(c, Scheme::hybrid), 75.26, 0.01);
  EXPECT_NEAR(scheme_energy(c, Scheme::ba), 58.68, 0.01);
  EXPECT_NEAR(scheme_energy(c, Scheme::iba), 60.50, 0.01);
  EXPECT_NEAR(scheme_energy(c, Scheme::iba) - scheme_energy(c, Scheme::ba), 1.82, 1e-9);
}

TEST(SchemeEnergy, IsCompositionPricedByTheTable) {
  CostTable c;
  c.tx_per_octet = 1;
  c.rx_per_octet = 10;
  c.sha1 = 100;
  c.aes = 1000;
  c.hmac = 10000;
  c.ecdh = 100000;
  c.cert = 1000000;
  c.bloom = 10000000;
  c.scheme_octets = {{"certificate", {1, 1}}, {"hybrid", {1, 1}}, {"ba", {1, 1}}, {"iba", {1, 1}}};
  EXPECT_DOUBLE_EQ(scheme_energy(c, Scheme::iba), 11 + 2 * 100 + 2 * 1000 + 10000 + 100000);
  EXPECT_DOUBLE_EQ(scheme_energy(c, Scheme::ba), 11 + 100 + 1000 + 10000 + 100000);
  EXPECT_DOUBLE_EQ(scheme_energy(c, Scheme::hybrid), 11 + 2 * 100 + 100000 + 10000000);
  EXPECT_DOUBLE_EQ(scheme_energy(c, Scheme::certificate), 11 + 100000 + 1000000);
  c.scheme_octets.erase("ba");
  EXPECT_EQ(error_of([&] { scheme_energy(c, Scheme::ba); }), ErrorKind::unknown_scheme);
}

TEST(SchemeEnergy, Names) {
  EXPECT_EQ(parse_scheme("iba"), Scheme::iba);
  EXPECT_EQ(to_string(Scheme::certificate), "certificate");
  EXPECT_EQ(error_of([] { parse_scheme("tls"); }), ErrorKind::unknown_scheme);
}

TEST(Scalability, MaxNetworkSize) {
  EXPECT_EQ(max_network_size(65536, 2), 32768u);
  EXPECT_EQ(max_network_size(Scheme::certificate, 65536, 2), 32768u);
  EXPECT_EQ(max_network_size(Scheme::hybrid, 65536, 2), 15792u);
  EXPECT_EQ(max_network_size(Scheme::ba, 1000, 3), 333u);
  EXPECT_EQ(error_of([] { max_network_size(100, 0); }), ErrorKind::invalid_params);
}

TEST(RunningStats, AgreesWithTwoPass) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> d(1e6, 3);  // large offset stresses cancellation
  std::vector<double> xs(5000);
  RunningStats s;
  for (auto& x : xs) {
    x = d(rng);
    s.add(x);
  }
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= double(xs.size());
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  EXPECT_NEAR(s.mean(), mean, 1e-7);
  EXPECT_NEAR(s.variance(), ss / double(xs.size() - 1), 1e-6);
  EXPECT_EQ(s.count(), 5000u);
  RunningStats one;
  one.add(4);
  EXPECT_EQ(one.variance(), 0.0);
  EXPECT_EQ(RunningStats{}.std_error(), 0.0);
}

TEST(Curves, FromTrace) {
  TraceLog a, b;
  a.append({0, 0, "key_derived", 0, 1.5, "", 1, Origin::honest});
  a.append({0, 1, "rx_cycle", 93, 2.0, "rejected", 1, Origin::adversary});
  a.append({0, 1, "key_derived", 0, 0.5, "", 2, Origin::honest});
  b.append({0, 0, "key_derived", 0, 1.0, "", 1, Origin::honest});
  auto keys = curve_from_trace({a, b}, "keys");
  ASSERT_EQ(keys.size(), 2u);
  EXPECT_EQ(keys[0].x, 1);
  EXPECT_EQ(keys[0].mean, 1.0);
  EXPECT_EQ(keys[1].mean, 0.5);  // replica b contributes 0 in cycle 2
  EXPECT_EQ(keys[1].replicas, 2u);
  auto adv = curve_from_trace({a, b}, "adversary_energy");
  EXPECT_EQ(adv[0].mean, 1.0);
  EXPECT_EQ(curve_from_trace({a, b}, "bogus_rx")[0].mean, 0.5);
  EXPECT_NEAR(curve_from_trace({a, b}, "energy")[0].mean, 2.25, 1e-12);
  EXPECT_EQ(error_of([&] { curve_from_trace({a}, "latency"); }), ErrorKind::unknown_metric);
}

TEST(Trace, CsvRoundTripAndErrors) {
  TraceLog a;
  a.append({1.25, 3, "rx_cycle", 93, 2.6598, "accepted", 1, Origin::adversary});
  a.append({2, 4, "key_derived", 0, 48.8272, "peer:3", 1, Origin::honest});
  std::string csv = a.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "time_s,node_id,event,bytes,energy_mJ,verdict,cycle,origin");
  auto b = TraceLog::parse_csv(csv);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b.records()[0].event, "rx_cycle");
  EXPECT_EQ(b.records()[0].origin, Origin::adversary);
  EXPECT_NEAR(b.records()[1].energy_mj, 48.8272, 1e-6);
  EXPECT_EQ(b.to_csv(), csv);
  EXPECT_EQ(error_of([] { TraceLog::parse_csv("bad header\n"); }), ErrorKind::parse);
  EXPECT_EQ(error_of([] {
              TraceLog::parse_csv("time_s,node_id,event,bytes,energy_mJ,verdict,cycle,origin\n1,2,3\n");
            }),
            ErrorKind::parse);
}
