#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wsnkm/simulation.hpp"

namespace wsnkm {

enum class AttackKind : std::uint8_t { memory_flood, energy_flood, tamper, replay_1, replay_2, replay_3 };
std::string_view to_string(AttackKind k);
/// Throws Error{parse}.
AttackKind parse_attack(std::string_view name);

struct AttackPlan {
  AttackKind kind = AttackKind::memory_flood;
  /// Memory flood: injection times uniform on [1, tau] minutes after the cycle message.
  double tau_minutes = 10;
  /// Energy flood: injection times uniform on [0, window] minutes after the cycle message.
  double window_minutes = 10;
  std::size_t count = 100;
  CycleIndex cycle = 1;
  /// Memory flood victim.
  NodeId target = 0;
  /// Energy flood radio position; random in the field when absent.
  std::optional<Point> position;
  /// Energy flood radio range; the sensor range when 0.
  double range = 0;

  /// Throws Error{validation} (tau <= 1, negative window).
  void validate() const;
};

/// Copy of `message` with bit `bit` (0 = MSB of octet 0) flipped.
/// Throws Error{invalid_length} when bit is out of range.
Bytes tamper(ByteView message, std::size_t bit);

/// Random ciphertext with valid framing. i-BA messages carry `cycle` as the
/// plaintext index so they hit the Eq. 9 check rather than a cheap index test.
CycleMessage bogus_cycle_message(Variant variant, CycleIndex cycle, Rng& rng);

struct MemoryFloodResult {
  std::size_t injected = 0;
  std::size_t admitted = 0;                 // bogus messages let into the target's buffer
  std::size_t buffered_at_disclosure = 0;   // bogus octets held when K_Auth arrives
  std::vector<std::pair<double, std::size_t>> series;  // (seconds after T_BSi, bogus octets) per injection
};

/// Sends plan.count bogus cycle messages straight to plan.target and runs the
/// simulation to completion.
MemoryFloodResult inject_memory_flood(Simulation& sim, const AttackPlan& plan, Rng& rng);

struct EnergyFloodResult {
  std::size_t injected = 0;
  std::size_t adversary_degree = 0;      // sensors within the adversary radio's range
  std::size_t relays = 0;                // honest retransmissions of bogus messages
  std::size_t admitted = 0;              // bogus messages that reached any pending buffer
  double retransmission_mj = 0;          // tx energy honest nodes spent relaying them
  double induced_mj = 0;                 // all energy charged to adversary traffic
  double one_hop_bound_mj = 0;           // degree * count * (rx of one message + one hash)
};

/// Floods plan.count bogus cycle messages from an adversary radio and runs
/// the simulation to completion.
EnergyFloodResult inject_energy_flood(Simulation& sim, const AttackPlan& plan, Rng& rng);

/// The three ways of replaying the cycle message.
///   1 : same cycle, before the disclosure (a plain retransmission)
///   2 : in a later cycle, with the target's own copy of that cycle's message jammed
///   3 : after the disclosure, with the target's disclosure jammed, plus
///       tickets forged under the now-public K_DS
enum class Replay3Variant : std::uint8_t {
  late_tickets,     // only the disclosure jammed; forged tickets arrive late
  delayed_message,  // message and disclosure jammed; message replayed unaltered, late
  altered_delta,    // message and disclosure jammed; delta rewritten to delta + t
};
std::string_view to_string(Replay3Variant v);

struct ReplayOutcome {
  int replay_case = 0;
  std::string variant;
  bool passed = false;
  std::size_t target_keys = 0;            // keys the target derived in the attacked cycle
  std::size_t adversary_keys = 0;         // keys the target holds with the adversary radio
  std::size_t adversary_authenticated = 0;
  std::string detail;
};

/// Runs one replay attack against `target` on a fresh simulation and judges it.
///   case 1 passes when every link of the target is established once, with no
///          duplicate derivations;
///   case 2 passes when the target derives no key in the attacked cycle and
///          never authenticates the replayed message;
///   case 3 passes when the target never shares a key with the adversary and
///          never authenticates an adversary-delivered message.
/// sim must be fresh (not yet run); case 2 needs at least two cycles.
ReplayOutcome replay_case_1(Simulation& sim, NodeId target);
ReplayOutcome replay_case_2(Simulation& sim, NodeId target, bool rewrite_index = false);
ReplayOutcome replay_case_3(Simulation& sim, NodeId target, Replay3Variant variant, Rng& rng);

}  // namespace wsnkm
