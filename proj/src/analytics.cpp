#include "wsnkm/analytics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace wsnkm::analytics {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

FixedPoint solve_pr_detail(double k, double p_loss) {
  if (!(k >= 0)) throw Error(ErrorKind::out_of_model, "neighbour count must be non-negative");
  if (!(p_loss >= 0 && p_loss <= 1)) throw Error(ErrorKind::out_of_model, "p_loss outside [0,1]");
  auto f = [&](double x) { return 1.0 - std::pow(p_loss, k * x); };
  FixedPoint out;
  double x = 1.0;
  // the map is increasing, so iterating from 1 descends onto the largest root;
  // convergence is slow only next to the critical point k*ln(1/p_loss) = 1
  constexpr std::size_t kMaxIterations = 200'000'000;
  for (; out.iterations < kMaxIterations; ++out.iterations) {
    double fx = f(x);
    if (std::abs(x - fx) < 1e-13) break;
    x = fx;
  }
  out.value = x;
  out.residual = std::abs(x - f(x));
  return out;
}

namespace {

// integral of sqrt(r^2 - t^2) dt
double chord_primitive(double t, double r) {
  double u = std::clamp(t / r, -1.0, 1.0);
  double s = std::sqrt(std::max(0.0, r * r - t * t));
  return 0.5 * (t * s + r * r * std::asin(u));
}

// Area of the origin-centred disc of radius r inside {t <= X, u <= Y}.
double quadrant_area(double X, double Y, double r) {
  if (X <= -r || Y <= -r) return 0.0;
  X = std::min(X, r);
  auto full = [&](double lo, double hi) {
    hi = std::min(hi, X);
    return hi > lo ? 2.0 * (chord_primitive(hi, r) - chord_primitive(lo, r)) : 0.0;
  };
  if (Y >= r) return full(-r, r);
  double c = std::sqrt(r * r - Y * Y);
  auto capped = [&](double lo, double hi) {
    hi = std::min(hi, X);
    return hi > lo ? Y * (hi - lo) + chord_primitive(hi, r) - chord_primitive(lo, r) : 0.0;
  };
  if (Y >= 0) return full(-r, -c) + capped(-c, c) + full(c, r);
  return capped(-c, c);
}

struct GaussRule {
  std::array<double, 16> nodes{};
  std::array<double, 16> weights{};
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_16.
GaussRule make_rule() {
  GaussRule g;
  constexpr int n = 16;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    g.nodes[i] = x;
    g.weights[i] = 2.0 / ((1 - x * x) * dp * dp);
  }
  return g;
}

const GaussRule& rule() {
  static const GaussRule g = make_rule();
  return g;
}

// Quadrature abscissae/weights over [0, half] with panel edges at the kinks.
std::vector<std::pair<double, double>> axis_points(double half, double r) {
  // the disc reaches the near edge at x = r and the far edge at x = 2 half - r
  std::vector<double> edges{0.0, half};
  for (double k : {r, 2 * half - r}) {
    if (k > 0 && k < half) edges.push_back(k);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  constexpr int kPanels = 24;
  std::vector<std::pair<double, double>> out;
  const auto& g = rule();
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    double w = (edges[e + 1] - edges[e]) / kPanels;
    for (int p = 0; p < kPanels; ++p) {
      double lo = edges[e] + p * w;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        out.emplace_back(lo + 0.5 * w * (g.nodes[i] + 1), 0.5 * w * g.weights[i]);
      }
    }
  }
  return out;
}

}  // namespace

double coverage_fraction(double x, double y, double a, double r) {
  if (r <= 0) return 0.0;
  double x0 = -x, x1 = a - x, y0 = -y, y1 = a - y;
  double area = quadrant_area(x1, y1, r) - quadrant_area(x0, y1, r) - quadrant_area(x1, y0, r) +
                quadrant_area(x0, y0, r);
  return area / (a * a);
}

double mean_coverage_fraction(double a, double r) {
  if (r <= 0) return 0.0;
  // symmetric in both axes: one quarter of the field suffices
  double half = a / 2;
  auto pts = axis_points(half, r);
  double sum = 0;
  for (auto [x, wx] : pts) {
    for (auto [y, wy] : pts) sum += wx * wy * coverage_fraction(x, y, a, r);
  }
  return sum / (half * half);
}

double expected_degree(std::size_t n, double a, double r) {
  if (!(a > 0) || !(r >= 0)) throw Error(ErrorKind::out_of_model, "field side and range must be positive");
  if (n == 0) return 0.0;
  double others = double(n - 1);
  if (r >= a * std::sqrt(2.0)) return others;
  if (r > a) throw Error(ErrorKind::out_of_model, "range exceeds the field side");
  return others * mean_coverage_fraction(a, r);
}

double p_share(std::size_t m, double p_r) {
  if (!(p_r >= 0 && p_r <= 1)) throw Error(ErrorKind::out_of_model, "p_r outside [0,1]");
  double success = std::pow(p_r, 4);
  return 1.0 - std::pow(1.0 - success, double(m));
}

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::certificate: return "certificate";
    case Scheme::hybrid: return "hybrid";
    case Scheme::ba: return "ba";
    case Scheme::iba: return "iba";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorKind::unknown_scheme, "unknown scheme '" + std::string(name) + "'");
}

std::map<Op, std::size_t> op_composition(Scheme s) {
  switch (s) {
    case Scheme::certificate: return {{Op::cert, 1}, {Op::ecdh, 1}};
    case Scheme::hybrid: return {{Op::bloom, 1}, {Op::sha1, 2}, {Op::ecdh, 1}};
    case Scheme::ba: return {{Op::sha1, 1}, {Op::aes, 1}, {Op::hmac, 1}, {Op::ecdh, 1}};
    case Scheme::iba: return {{Op::sha1, 2}, {Op::aes, 2}, {Op::hmac, 1}, {Op::ecdh, 1}};
  }
  throw Error(ErrorKind::unknown_scheme, "unknown scheme");
}

double scheme_energy(const CostTable& costs, Scheme s) {
  auto it = costs.scheme_octets.find(std::string(to_string(s)));
  if (it == costs.scheme_octets.end()) {
    throw Error(ErrorKind::unknown_scheme, "cost table has no octet counts for " + std::string(to_string(s)));
  }
  double total = it->second.tx * costs.tx_per_octet + it->second.rx * costs.rx_per_octet;
  for (auto [op, count] : op_composition(s)) total += double(count) * costs.cost(op);
  return total;
}

std::size_t max_network_size(Scheme s, std::size_t memory_octets, std::size_t id_octets) {
  if (id_octets == 0) throw Error(ErrorKind::invalid_params, "id size must be positive");
  if (s == Scheme::hybrid) return kHybridMaxNetwork;
  return memory_octets / id_octets;
}

void RunningStats::add(double x) {
  ++n_;
  double d = x - mean_;
  mean_ += d / double(n_);
  m2_ += d * (x - mean_);
}

double RunningStats::stddev() const { return std::sqrt(variance()); }

double RunningStats::std_error() const { return n_ ? stddev() / std::sqrt(double(n_)) : 0.0; }

std::vector<SeriesPoint> curve_from_trace(const std::vector<TraceLog>& replicas, std::string_view metric) {
  using Extract = double (*)(const TraceRecord&);
  Extract extract = nullptr;
  if (metric == "energy") {
    extract = [](const TraceRecord& r) { return r.energy_mj; };
  } else if (metric == "adversary_energy") {
    extract = [](const TraceRecord& r) { return r.origin == Origin::adversary ? r.energy_mj : 0.0; };
  } else if (metric == "keys") {
    extract = [](const TraceRecord& r) { return r.event == "key_derived" ? 1.0 : 0.0; };
  } else if (metric == "bogus_rx") {
    extract = [](const TraceRecord& r) {
      return r.origin == Origin::adversary && r.event == "rx_cycle" ? 1.0 : 0.0;
    };
  } else {
    throw Error(ErrorKind::unknown_metric, "unknown metric '" + std::string(metric) + "'");
  }

  std::vector<std::map<CycleIndex, double>> per_replica;
  std::set<CycleIndex> xs;
  for (const auto& log : replicas) {
    auto& m = per_replica.emplace_back();
    for (const auto& r : log.records()) {
      m[r.cycle] += extract(r);
      xs.insert(r.cycle);
    }
  }
  std::vector<SeriesPoint> out;
  for (CycleIndex x : xs) {
    RunningStats s;
    for (const auto& m : per_replica) {
      auto it = m.find(x);
      s.add(it == m.end() ? 0.0 : it->second);
    }
    out.push_back({double(x), s.mean(), s.stddev(), s.count()});
  }
  return out;
}

}  // namespace wsnkm::analytics
