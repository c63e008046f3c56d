#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "wsnkm/energy.hpp"
#include "wsnkm/trace.hpp"

namespace wsnkm::analytics {

// --- reception probability under blind flooding ------------------------------

struct FixedPoint {
  double value = 0;
  double residual = 0;  // |x - (1 - p_loss^(k x))|
  std::size_t iterations = 0;
};

/// Largest root in [0,1] of x = 1 - p_loss^(k x), iterating from x = 1.
/// Throws Error{out_of_model} for k < 0 or p_loss outside [0,1].
FixedPoint solve_pr_detail(double k, double p_loss);
inline double solve_pr(double k, double p_loss) { return solve_pr_detail(k, p_loss).value; }

// --- neighbourhood geometry --------------------------------------------------

/// Area of the disc of radius r centred at (x, y) that lies inside [0,a]^2,
/// as a fraction of the field area a^2.
double coverage_fraction(double x, double y, double a, double r);

/// pi z^2: the coverage fraction of any point at least r from every edge.
inline double interior_fraction(double z) { return 3.14159265358979323846 * z * z; }

/// Mean coverage fraction over uniformly placed centres.
double mean_coverage_fraction(double a, double r);

/// Expected neighbour count of a node among N uniformly deployed ones:
/// (N-1) * mean_coverage_fraction. r >= a*sqrt(2) gives N-1.
/// Throws Error{out_of_model} when a < r < a*sqrt(2) or r < 0.
double expected_degree(std::size_t n, double a, double r);

// --- key-sharing probability -------------------------------------------------

/// 1 - (1 - p_r^4)^m.
double p_share(std::size_t m, double p_r);

// --- energy and scalability --------------------------------------------------

enum class Scheme : std::uint8_t { certificate, hybrid, ba, iba };
std::string_view to_string(Scheme s);
/// Throws Error{unknown_scheme}.
Scheme parse_scheme(std::string_view name);
inline constexpr Scheme kAllSchemes[] = {Scheme::certificate, Scheme::hybrid, Scheme::ba, Scheme::iba};

/// Primitive operations one node runs per handshake.
std::map<Op, std::size_t> op_composition(Scheme s);

/// Per-handshake energy of one node: op composition priced by the table plus
/// the scheme's tx/rx octets. Throws Error{unknown_scheme} when the table has
/// no octet counts for the scheme.
double scheme_energy(const CostTable& costs, Scheme s);

inline constexpr std::size_t kHybridMaxNetwork = 15792;

/// Nodes whose ids fit in `memory_octets` of revocation list. The hybrid
/// scheme is bounded by its key-space construction instead and returns
/// kHybridMaxNetwork. Throws Error{invalid_params} when id_octets == 0.
std::size_t max_network_size(Scheme s, std::size_t memory_octets, std::size_t id_octets);
inline std::size_t max_network_size(std::size_t memory_octets, std::size_t id_octets) {
  return max_network_size(Scheme::iba, memory_octets, id_octets);
}

// --- replica aggregation -------------------------------------------------------

/// Streaming mean / sample variance (Welford).
class RunningStats {
 public:
  void add(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / double(n_ - 1) : 0.0; }
  double stddev() const;
  double std_error() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0;
  double m2_ = 0;
};

struct SeriesPoint {
  double x = 0;
  double mean = 0;
  double stddev = 0;
  std::size_t replicas = 0;
};

/// Per-replica metric series keyed by cycle, averaged across replicas.
/// Metrics:
///   energy         sum of energy_mJ
///   adversary_energy  sum of energy_mJ on adversary-origin records
///   keys           key_derived records
///   bogus_rx       adversary-origin rx_cycle records
/// A replica without records for some cycle contributes 0 there.
/// Throws Error{unknown_metric}.
std::vector<SeriesPoint> curve_from_trace(const std::vector<TraceLog>& replicas, std::string_view metric);

}  // namespace wsnkm::analytics
