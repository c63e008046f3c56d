#include "wsnkm/experiments.hpp"

#include <fmt/format.h>

#include <cmath>
#include <functional>
#include <map>

namespace wsnkm {

namespace {

using analytics::RunningStats;

std::size_t to_size(std::string_view v, std::string_view key) { return static_cast<std::size_t>(parse_u64(v, key)); }

std::vector<double> parse_list(const std::string& v, const std::string& key) {
  auto kv = KeyValueFile::parse(key + " = " + v);
  auto list = kv.get_double_list(key);
  if (!list || list->empty()) throw Error(ErrorKind::parse, key + ": empty list");
  return *list;
}

SimConfig recipe_config(const Scenario& s) {
  SimConfig c = s.sim;
  c.record_trace = false;
  return c;
}

double ratio(std::size_t a, std::size_t b) { return b ? double(a) / double(b) : 0.0; }

}  // namespace

std::uint64_t replica_seed(std::uint64_t base, std::uint64_t tag, std::uint64_t replica) {
  // splitmix64 over the three inputs
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ tag) ^ replica);
}

void Scenario::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::validation, what); };
  if (!seed) fail("scenario has no seed");
  if (replicas == 0) fail("replicas must be at least 1");
  if (sim.nodes == 0) fail("nodes must be at least 1");
  if (!(sim.side > 0)) fail("side must be positive");
  if (!(sim.range >= 0)) fail("range must be non-negative");
  if (!(sim.p_loss >= 0 && sim.p_loss <= 1)) fail("p_loss must lie in [0,1]");
  if (sim.cycles == 0) fail("cycles must be at least 1");
  if (!(sim.disclosure_delay > 0)) fail("disclosure_delay must be positive");
  if (sim.schedule.empty() && !(sim.cycle_gap > sim.disclosure_delay + sim.ack_delay)) {
    fail("cycle_gap must exceed disclosure_delay plus ack_delay");
  }
  if (!(sim.ticket_lead > 0 && sim.ticket_lead < sim.cycle_gap - sim.disclosure_delay)) {
    fail("ticket_lead must be positive and fit between disclosures");
  }
  attack.validate();
  for (double t : tau_values) {
    if (!(t > 1)) fail("every tau must exceed 1 minute");
  }
  for (double n : node_counts) {
    if (!(n >= 1) || n != std::floor(n)) fail("node counts must be positive integers");
  }
  for (double p : loss_values) {
    if (!(p >= 0 && p <= 1)) fail("loss values must lie in [0,1]");
  }
  for (double p : reception_losses) {
    if (!(p >= 0 && p <= 1)) fail("loss values must lie in [0,1]");
  }
  if (max_cycles == 0) fail("max_cycles must be at least 1");
  if (floods_per_replica == 0) fail("floods_per_replica must be at least 1");
  if (id_octets == 0) fail("id_octets must be positive");
}

std::uint64_t Scenario::base_seed() const {
  if (!seed) throw Error(ErrorKind::validation, "scenario has no seed");
  return *seed;
}

Scenario parse_scenario(const KeyValueFile& kv) {
  Scenario s;
  s.sim.backend = GroupBackend::toy;
  std::optional<std::filesystem::path> cost_table;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto num = [](double& dst) { return Setter([&dst](const std::string& v, const std::string& k) { dst = parse_double(v, k); }); };
  auto size = [](std::size_t& dst) { return Setter([&dst](const std::string& v, const std::string& k) { dst = to_size(v, k); }); };
  auto list = [](std::vector<double>& dst) { return Setter([&dst](const std::string& v, const std::string& k) { dst = parse_list(v, k); }); };

  std::map<std::string, Setter> setters{
      {"nodes", size(s.sim.nodes)},
      {"side", num(s.sim.side)},
      {"range", num(s.sim.range)},
      {"p_loss", num(s.sim.p_loss)},
      {"bs_mode", [&](const std::string& v, const std::string&) { s.sim.bs_mode = parse_bs_mode(v); }},
      {"variant", [&](const std::string& v, const std::string&) { s.sim.variant = parse_variant(v); }},
      {"backend", [&](const std::string& v, const std::string&) { s.sim.backend = parse_backend(v); }},
      {"cycles", size(s.sim.cycles)},
      {"lifetime", size(s.sim.lifetime)},
      {"disclosure_delay", num(s.sim.disclosure_delay)},
      {"cycle_gap", num(s.sim.cycle_gap)},
      {"schedule", list(s.sim.schedule)},
      {"ticket_lead", num(s.sim.ticket_lead)},
      {"ack_delay", num(s.sim.ack_delay)},
      {"hop_latency", num(s.sim.hop_latency)},
      {"max_clock_offset", num(s.sim.max_clock_offset)},
      {"buffer_capacity", size(s.sim.node.buffer_capacity)},
      {"freshness_epsilon", num(s.sim.node.freshness_epsilon)},
      {"max_chain_gap", size(s.sim.node.max_chain_gap)},
      {"resync_slots", size(s.sim.node.resync_slots)},
      {"cost_table", [&](const std::string& v, const std::string&) { cost_table = v; }},
      {"seed", [&](const std::string& v, const std::string& k) { s.seed = parse_u64(v, k); }},
      {"replicas", size(s.replicas)},
      {"out_dir", [&](const std::string& v, const std::string&) { s.out_dir = v; }},
      {"attack.kind", [&](const std::string& v, const std::string&) { s.attack.kind = parse_attack(v); }},
      {"attack.tau_minutes", num(s.attack.tau_minutes)},
      {"attack.window_minutes", num(s.attack.window_minutes)},
      {"attack.count", size(s.attack.count)},
      {"attack.target", [&](const std::string& v, const std::string& k) {
         s.attack.target = static_cast<NodeId>(parse_u64(v, k));
       }},
      {"attack.range", num(s.attack.range)},
      {"sweep.tau", list(s.tau_values)},
      {"sweep.nodes", list(s.node_counts)},
      {"sweep.p_loss", list(s.loss_values)},
      {"sweep.reception_p_loss", list(s.reception_losses)},
      {"sweep.max_cycles", size(s.max_cycles)},
      {"sweep.floods", size(s.floods_per_replica)},
      {"memory_octets", size(s.memory_octets)},
      {"id_octets", size(s.id_octets)},
  };
  for (const auto& [key, value] : kv.entries()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw Error(ErrorKind::parse, "unknown scenario key '" + key + "'");
    it->second(value, key);
  }
  s.sim.costs = cost_table ? CostTable::load(*cost_table) : CostTable::calibrated();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  auto kv = KeyValueFile::load(path);
  Scenario s;
  try {
    s = parse_scenario(kv);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::io) throw Error(ErrorKind::parse, e.what());
    throw;
  }
  return s;
}

// --- fig2 ------------------------------------------------------------------------

std::vector<MemoryRow> fig2_memory(const Scenario& s) {
  std::vector<MemoryRow> rows;
  for (Variant v : {Variant::ba, Variant::iba}) {
    for (std::size_t ti = 0; ti < s.tau_values.size(); ++ti) {
      MemoryRow row{v, s.tau_values[ti], {}, {}};
      for (std::size_t r = 0; r < s.replicas; ++r) {
        SimConfig c = recipe_config(s);
        c.variant = v;
        c.cycles = 1;
        c.bs_mode = BsMode::powerful;
        c.seed = replica_seed(s.base_seed(), 0, r);
        Simulation sim(c);
        AttackPlan plan = s.attack;
        plan.kind = AttackKind::memory_flood;
        plan.tau_minutes = s.tau_values[ti];
        plan.cycle = 1;
        if (plan.target >= sim.size()) plan.target = 0;
        Rng rng(replica_seed(s.base_seed(), 100 + ti, r));
        auto res = inject_memory_flood(sim, plan, rng);
        row.octets.add(double(res.buffered_at_disclosure));
        row.admitted.add(double(res.admitted));
      }
      rows.push_back(row);
    }
  }
  return rows;
}

// --- fig3 ------------------------------------------------------------------------

std::vector<EnergyRow> fig3_energy(const Scenario& s) {
  std::vector<EnergyRow> rows;
  for (Variant v : {Variant::ba, Variant::iba}) {
    for (double nd : s.node_counts) {
      auto n = static_cast<std::size_t>(nd);
      EnergyRow row;
      row.variant = v;
      row.nodes = n;
      for (std::size_t r = 0; r < s.replicas; ++r) {
        SimConfig c = recipe_config(s);
        c.variant = v;
        c.nodes = n;
        c.cycles = 1;
        c.bs_mode = BsMode::multihop;
        c.seed = replica_seed(s.base_seed(), 1000 + n, r);
        Simulation sim(c);
        AttackPlan plan = s.attack;
        plan.kind = AttackKind::energy_flood;
        plan.cycle = 1;
        Rng rng(replica_seed(s.base_seed(), 20000 + n, r));
        auto res = inject_energy_flood(sim, plan, rng);
        row.induced_mj.add(res.induced_mj);
        row.retransmission_mj.add(res.retransmission_mj);
        row.relays.add(double(res.relays));
        row.bound_mj.add(res.one_hop_bound_mj);
        row.admitted.add(double(res.admitted));
        if (res.induced_mj > res.one_hop_bound_mj + 1e-9) row.bound_held = false;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

// --- fig6 ------------------------------------------------------------------------

std::vector<ConnectivityRow> fig6_connectivity(const Scenario& s) {
  std::vector<ConnectivityRow> rows;
  for (std::size_t li = 0; li < s.loss_values.size(); ++li) {
    double p = s.loss_values[li];
    std::vector<ConnectivityRow> per_m(s.max_cycles);
    for (std::size_t m = 0; m < s.max_cycles; ++m) {
      per_m[m].p_loss = p;
      per_m[m].m = m + 1;
      per_m[m].analytic = analytics::p_share(m + 1, 1.0 - p);
    }
    for (std::size_t r = 0; r < s.replicas; ++r) {
      SimConfig c = recipe_config(s);
      c.p_loss = p;
      c.cycles = s.max_cycles;
      c.bs_mode = BsMode::powerful;
      c.seed = replica_seed(s.base_seed(), 300 + li, r);
      Simulation sim(c);
      for (std::size_t m = 1; m <= s.max_cycles; ++m) {
        // after the acks of cycle m and before the tickets of cycle m+1
        sim.run_until(sim.disclosure_time(m) + c.ack_delay + 0.5);
        PairStats ps = sim.pair_stats();
        per_m[m - 1].shared.add(ps.shared_fraction());
        per_m[m - 1].confirmed.add(ps.confirmed_fraction());
      }
    }
    rows.insert(rows.end(), per_m.begin(), per_m.end());
  }
  return rows;
}

// --- fig7 ------------------------------------------------------------------------

std::vector<FleetEnergyRow> fig7_fleet_energy(const Scenario& s) {
  std::vector<FleetEnergyRow> rows;
  for (double nd : s.node_counts) {
    auto n = static_cast<std::size_t>(nd);
    double handshakes = double(n) * analytics::expected_degree(n, s.sim.side, s.sim.range);
    std::map<Variant, RunningStats> sims;
    for (Variant v : {Variant::ba, Variant::iba}) {
      for (std::size_t r = 0; r < s.replicas; ++r) {
        SimConfig c = recipe_config(s);
        c.variant = v;
        c.nodes = n;
        c.cycles = 1;
        c.p_loss = 0;
        c.bs_mode = BsMode::powerful;
        c.seed = replica_seed(s.base_seed(), 4000 + n, r);
        Simulation sim(c);
        sim.run();
        sims[v].add(sim.ledger().network_total());
      }
    }
    for (auto scheme : analytics::kAllSchemes) {
      FleetEnergyRow row;
      row.nodes = n;
      row.scheme = scheme;
      row.per_handshake_mj = analytics::scheme_energy(s.sim.costs, scheme);
      row.expected_handshakes = handshakes;
      row.analytic_total_mj = handshakes * row.per_handshake_mj;
      if (scheme == analytics::Scheme::ba) row.simulated_mj = sims[Variant::ba];
      if (scheme == analytics::Scheme::iba) row.simulated_mj = sims[Variant::iba];
      rows.push_back(row);
    }
  }
  return rows;
}

// --- reception ---------------------------------------------------------------------

std::vector<ReceptionRow> reception_frequency(const Scenario& s) {
  std::vector<ReceptionRow> rows;
  const double k = analytics::expected_degree(s.sim.nodes, s.sim.side, s.sim.range);
  for (std::size_t li = 0; li < s.reception_losses.size(); ++li) {
    ReceptionRow row;
    row.p_loss = s.reception_losses[li];
    row.expected_degree = k;
    row.analytic = analytics::solve_pr(k, row.p_loss);
    for (std::size_t r = 0; r < s.replicas; ++r) {
      Rng rng(replica_seed(s.base_seed(), 500 + li, r));
      DeploymentGraph g = deploy(s.sim.nodes, s.sim.side, s.sim.range, row.p_loss, rng);
      NodeId bs = g.attach({s.sim.side / 2, s.sim.side / 2}, s.sim.range);
      Radio radio(g, rng);
      std::vector<std::size_t> got(g.sensors(), 0);
      for (std::size_t f = 0; f < s.floods_per_replica; ++f) {
        auto t = blind_flood(g, radio, bs, kPayloadOctets, Origin::honest, [](NodeId, std::size_t) { return true; });
        for (std::size_t v = 0; v < g.sensors(); ++v) got[v] += t.received[v];
      }
      auto reachable = g.reachable_from(bs);
      std::size_t all = 0, reach_sum = 0, reach_n = 0;
      for (std::size_t v = 0; v < g.sensors(); ++v) {
        all += got[v];
        if (reachable[v]) {
          reach_sum += got[v];
          ++reach_n;
        }
      }
      row.all_nodes.add(ratio(all, g.sensors() * s.floods_per_replica));
      if (reach_n) row.reachable_nodes.add(ratio(reach_sum, reach_n * s.floods_per_replica));
    }
    rows.push_back(row);
  }
  return rows;
}

// --- replay suite ----------------------------------------------------------------------

std::vector<ReplayRow> replay_suite(const Scenario& s) {
  auto fresh = [&](Variant v, std::size_t cycles, std::uint64_t tag) {
    SimConfig c = recipe_config(s);
    c.variant = v;
    c.nodes = 6;
    c.side = 40;
    c.range = 30;
    c.p_loss = 0;
    c.cycles = cycles;
    c.bs_mode = BsMode::powerful;
    c.seed = replica_seed(s.base_seed(), 700, tag);
    return std::make_unique<Simulation>(c);
  };
  auto busiest = [](const Simulation& sim) {
    NodeId best = 0;
    for (std::size_t v = 0; v < sim.size(); ++v) {
      if (sim.graph().neighbors(v).size() > sim.graph().neighbors(best).size()) best = static_cast<NodeId>(v);
    }
    return best;
  };
  std::vector<ReplayRow> rows;
  {
    auto sim = fresh(Variant::iba, 1, 1);
    rows.push_back({Variant::iba, replay_case_1(*sim, busiest(*sim))});
  }
  for (bool rewrite : {false, true}) {
    auto sim = fresh(Variant::iba, 2, 2);
    rows.push_back({Variant::iba, replay_case_2(*sim, busiest(*sim), rewrite)});
  }
  {
    auto sim = fresh(Variant::ba, 2, 2);
    rows.push_back({Variant::ba, replay_case_2(*sim, busiest(*sim))});
  }
  for (auto v : {Replay3Variant::late_tickets, Replay3Variant::delayed_message, Replay3Variant::altered_delta}) {
    auto sim = fresh(Variant::iba, 1, 3);
    Rng rng(replica_seed(s.base_seed(), 701, static_cast<std::uint64_t>(v)));
    rows.push_back({Variant::iba, replay_case_3(*sim, busiest(*sim), v, rng)});
  }
  return rows;
}

// --- CSV -------------------------------------------------------------------------------

std::string to_csv(const std::vector<MemoryRow>& rows) {
  std::string out = "variant,tau_min,mean_bogus_octets,stddev_bogus_octets,mean_admitted,replicas\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{:.6g},{:.6f},{:.6f},{:.6f},{}\n", to_string(r.variant), r.tau_minutes, r.octets.mean(),
                       r.octets.stddev(), r.admitted.mean(), r.octets.count());
  }
  return out;
}

std::string to_csv(const std::vector<EnergyRow>& rows) {
  std::string out =
      "variant,nodes,mean_induced_mJ,stddev_induced_mJ,mean_retransmission_mJ,mean_relays,"
      "mean_one_hop_bound_mJ,mean_admitted,bound_held,replicas\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{},{}\n", to_string(r.variant), r.nodes,
                       r.induced_mj.mean(), r.induced_mj.stddev(), r.retransmission_mj.mean(), r.relays.mean(),
                       r.bound_mj.mean(), r.admitted.mean(), r.bound_held ? 1 : 0, r.induced_mj.count());
  }
  return out;
}

std::string to_csv(const std::vector<ConnectivityRow>& rows) {
  std::string out = "p_loss,m,analytic_p_share,sim_shared_fraction,sim_confirmed_fraction,replicas\n";
  for (const auto& r : rows) {
    out += fmt::format("{:.6g},{},{:.6f},{:.6f},{:.6f},{}\n", r.p_loss, r.m, r.analytic, r.shared.mean(),
                       r.confirmed.mean(), r.shared.count());
  }
  return out;
}

std::string to_csv(const std::vector<FleetEnergyRow>& rows) {
  std::string out = "nodes,scheme,per_handshake_mJ,expected_handshakes,analytic_total_mJ,sim_total_mJ,replicas\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{:.4f},{:.6f},{:.6f},{},{}\n", r.nodes, analytics::to_string(r.scheme),
                       r.per_handshake_mj, r.expected_handshakes, r.analytic_total_mj,
                       r.simulated_mj ? fmt::format("{:.6f}", r.simulated_mj->mean()) : std::string(),
                       r.simulated_mj ? r.simulated_mj->count() : 0);
  }
  return out;
}

std::string to_csv(const std::vector<ReceptionRow>& rows) {
  std::string out = "p_loss,expected_degree,analytic_p_r,sim_all_nodes,sim_reachable_nodes,replicas\n";
  for (const auto& r : rows) {
    out += fmt::format("{:.6g},{:.6f},{:.6f},{:.6f},{:.6f},{}\n", r.p_loss, r.expected_degree, r.analytic,
                       r.all_nodes.mean(), r.reachable_nodes.mean(), r.all_nodes.count());
  }
  return out;
}

std::string to_csv(const std::vector<ReplayRow>& rows) {
  std::string out = "case,variant,protocol,passed,detail\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},\"{}\"\n", r.outcome.replay_case, r.outcome.variant, to_string(r.variant),
                       r.outcome.passed ? 1 : 0, r.outcome.detail);
  }
  return out;
}

std::string table4_csv(const CostTable& costs) {
  std::string out = "scheme,computation,tx_octets,rx_octets,energy_mJ\n";
  for (auto scheme : analytics::kAllSchemes) {
    std::string ops;
    for (auto [op, count] : analytics::op_composition(scheme)) {
      if (!ops.empty()) ops += '+';
      ops += fmt::format("{} {}", count, to_string(op));
    }
    const auto& oct = costs.scheme_octets.at(std::string(analytics::to_string(scheme)));
    out += fmt::format("{},{},{:g},{:g},{:.2f}\n", analytics::to_string(scheme), ops, oct.tx, oct.rx,
                       analytics::scheme_energy(costs, scheme));
  }
  out += fmt::format("iba-ba,,,,{:.2f}\n", analytics::scheme_energy(costs, analytics::Scheme::iba) -
                                               analytics::scheme_energy(costs, analytics::Scheme::ba));
  return out;
}

std::string table5_csv(std::size_t memory_octets, std::size_t id_octets) {
  std::string out = "scheme,memory_octets,id_octets,max_network_size\n";
  for (auto scheme : analytics::kAllSchemes) {
    out += fmt::format("{},{},{},{}\n", analytics::to_string(scheme), memory_octets, id_octets,
                       analytics::max_network_size(scheme, memory_octets, id_octets));
  }
  return out;
}

RecipeOutput run_recipe(std::string_view recipe, const Scenario& s) {
  if (recipe == "fig2") return {"fig2.csv", to_csv(fig2_memory(s))};
  if (recipe == "fig3") return {"fig3.csv", to_csv(fig3_energy(s))};
  if (recipe == "fig6") return {"fig6.csv", to_csv(fig6_connectivity(s))};
  if (recipe == "fig7") return {"fig7.csv", to_csv(fig7_fleet_energy(s))};
  if (recipe == "table4") return {"table4.csv", table4_csv(s.sim.costs)};
  if (recipe == "table5") return {"table5.csv", table5_csv(s.memory_octets, s.id_octets)};
  if (recipe == "replay-suite") return {"replay_suite.csv", to_csv(replay_suite(s))};
  if (recipe == "reception") return {"reception.csv", to_csv(reception_frequency(s))};
  throw Error(ErrorKind::parse, "unknown recipe '" + std::string(recipe) + "'");
}

}  // namespace wsnkm
