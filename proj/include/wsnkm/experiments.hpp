#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wsnkm/adversary.hpp"
#include "wsnkm/analytics.hpp"
#include "wsnkm/config.hpp"
#include "wsnkm/simulation.hpp"

namespace wsnkm {

/// Everything a recipe run needs. Loaded from a key = value scenario file;
/// see data/scenarios/default.cfg for the recognised keys.
struct Scenario {
  SimConfig sim;
  AttackPlan attack;
  std::size_t replicas = 100;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir = "out";

  // recipe sweeps
  std::vector<double> tau_values{2, 5, 10, 20};
  std::vector<double> node_counts{100, 250, 500, 1000};
  std::vector<double> loss_values{0.05, 0.1, 0.2};
  std::vector<double> reception_losses{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  std::size_t max_cycles = 6;
  std::size_t floods_per_replica = 10;
  std::size_t memory_octets = 65536;
  std::size_t id_octets = 2;

  /// Throws Error{validation}.
  void validate() const;
  std::uint64_t base_seed() const;
};

/// Unknown keys and malformed values throw Error{parse}.
Scenario parse_scenario(const KeyValueFile& kv);
Scenario load_scenario(const std::filesystem::path& path);

/// Independent, reproducible seed for replica `r` of sweep point `tag`.
std::uint64_t replica_seed(std::uint64_t base, std::uint64_t tag, std::uint64_t replica);

// --- recipes ---------------------------------------------------------------------

struct MemoryRow {
  Variant variant = Variant::ba;
  double tau_minutes = 0;
  analytics::RunningStats octets;    // bogus octets buffered at disclosure
  analytics::RunningStats admitted;  // bogus messages admitted
};
/// Single victim, attack.count bogus messages at uniform [1, tau] minutes.
std::vector<MemoryRow> fig2_memory(const Scenario& s);

struct EnergyRow {
  Variant variant = Variant::ba;
  std::size_t nodes = 0;
  analytics::RunningStats induced_mj;
  analytics::RunningStats retransmission_mj;
  analytics::RunningStats relays;
  analytics::RunningStats bound_mj;
  analytics::RunningStats admitted;
  bool bound_held = true;  // induced <= one-hop bound in every replica
};
/// Multi-hop blind flooding, attack.count bogus messages at uniform [0, window] minutes.
std::vector<EnergyRow> fig3_energy(const Scenario& s);

struct ConnectivityRow {
  double p_loss = 0;
  std::size_t m = 0;
  double analytic = 0;  // p_share(m, 1 - p_loss)
  analytics::RunningStats shared;
  analytics::RunningStats confirmed;
};
/// Powerful BS; fraction of adjacent pairs holding a common key after m cycles.
std::vector<ConnectivityRow> fig6_connectivity(const Scenario& s);

struct FleetEnergyRow {
  std::size_t nodes = 0;
  analytics::Scheme scheme = analytics::Scheme::iba;
  double per_handshake_mj = 0;
  double expected_handshakes = 0;  // N * expected degree
  double analytic_total_mj = 0;
  std::optional<analytics::RunningStats> simulated_mj;  // BA / i-BA only
};
std::vector<FleetEnergyRow> fig7_fleet_energy(const Scenario& s);

struct ReceptionRow {
  double p_loss = 0;
  double expected_degree = 0;
  double analytic = 0;  // solve_pr(expected_degree, p_loss)
  analytics::RunningStats all_nodes;
  analytics::RunningStats reachable_nodes;  // nodes with a path to the BS
};
/// Multi-hop BS at the field center floods single-packet messages; per-node
/// reception frequency compared with the fixed point.
std::vector<ReceptionRow> reception_frequency(const Scenario& s);

struct ReplayRow {
  Variant variant = Variant::iba;
  ReplayOutcome outcome;
};
std::vector<ReplayRow> replay_suite(const Scenario& s);

// --- CSV ---------------------------------------------------------------------------

std::string to_csv(const std::vector<MemoryRow>& rows);
std::string to_csv(const std::vector<EnergyRow>& rows);
std::string to_csv(const std::vector<ConnectivityRow>& rows);
std::string to_csv(const std::vector<FleetEnergyRow>& rows);
std::string to_csv(const std::vector<ReceptionRow>& rows);
std::string to_csv(const std::vector<ReplayRow>& rows);
std::string table4_csv(const CostTable& costs);
std::string table5_csv(std::size_t memory_octets, std::size_t id_octets);

inline constexpr const char* kRecipes[] = {"fig2", "fig3", "fig6", "fig7", "table4", "table5", "replay-suite",
                                           "reception"};

struct RecipeOutput {
  std::string file_name;
  std::string csv;
};
/// Throws Error{parse} for an unknown recipe.
RecipeOutput run_recipe(std::string_view recipe, const Scenario& s);

}  // namespace wsnkm
