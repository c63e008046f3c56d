#include "wsnkm/trust_center.hpp"

#include <cmath>

namespace wsnkm {

SymKey random_key(Rng& rng) {
  SymKey k;
  for (std::size_t i = 0; i < kKeyOctets; i += 8) {
    std::uint64_t v = rng();
    for (std::size_t j = 0; j < 8; ++j) k.bytes[i + j] = static_cast<std::uint8_t>(v >> (8 * j));
  }
  return k;
}

std::vector<double> TrustCenter::uniform_schedule(std::size_t n, double start_s, double gap_s) {
  std::vector<double> s(n + 1);
  for (std::size_t i = 0; i <= n; ++i) s[i] = start_s + static_cast<double>(i) * gap_s;
  return s;
}

TrustCenter TrustCenter::init(std::size_t n, double t, std::vector<double> schedule, Rng& rng,
                              GroupParams group) {
  if (n == 0) throw Error(ErrorKind::invalid_length, "trust center needs at least one cycle");
  if (n > kMaxCycle) throw Error(ErrorKind::codec_range, "cycle count exceeds the 10-bit counter");
  if (!(t > 0)) throw Error(ErrorKind::invalid_schedule, "disclosure delay must be positive");
  if (schedule.size() != n + 1) throw Error(ErrorKind::invalid_schedule, "schedule needs n+1 entries");
  for (std::size_t i = 1; i <= n; ++i) {
    double gap = schedule[i] - schedule[i - 1];
    if (!(gap > t)) throw Error(ErrorKind::invalid_schedule, "cycle gaps must exceed the disclosure delay");
  }
  auto auth = crypto::KeyChain::generate(random_key(rng), n);
  auto ds = crypto::KeyChain::generate(random_key(rng), n);
  return TrustCenter(std::move(auth), std::move(ds), std::move(schedule), t, make_group(group));
}

std::uint32_t TrustCenter::delta(std::size_t i) const {
  return static_cast<std::uint32_t>(std::lround(schedule_.at(i) - schedule_.at(i - 1)));
}

NodeCredentials TrustCenter::provision_node(NodeId id, std::size_t lifetime, Rng& rng) const {
  if (lifetime > cycles()) throw Error(ErrorKind::insufficient_chain, "lifetime exceeds key chain length");
  NodeCredentials c;
  c.id = id;
  c.group = group_->params();
  c.keypair = group_->keygen(rng);
  c.signatures.reserve(lifetime);
  for (std::size_t i = 1; i <= lifetime; ++i) {
    c.signatures.push_back(crypto::mac(ds_chain_.link(i), c.keypair.public_key));
  }
  c.anchor0 = anchor(0);
  c.auth_commitment = auth_chain_.commitment();
  return c;
}

Bytes TrustCenter::part1(std::size_t i) const {
  return seal_cycle_body(auth_chain_.link(i), ds_chain_.link(i), static_cast<CycleIndex>(i), delta(i));
}

Digest TrustCenter::anchor(std::size_t i) const {
  if (i + 1 > cycles()) throw Error(ErrorKind::chain_exhausted, "no cycle after the last one");
  return crypto::hash(part1(i + 1));
}

CycleMessage TrustCenter::peek_cycle_message(std::size_t i, Variant variant) const {
  std::size_t last = variant == Variant::iba ? cycles() - 1 : cycles();
  if (i < 1 || i > last) throw Error(ErrorKind::chain_exhausted, "cycle index outside the key chains");
  CycleMessage m;
  m.variant = variant;
  m.part1 = part1(i);
  if (variant == Variant::iba) {
    m.part2 = seal_anchor_body(auth_chain_.link(i), anchor(i), static_cast<CycleIndex>(i));
    m.cycle = static_cast<CycleIndex>(i);
  }
  return m;
}

CycleMessage TrustCenter::build_cycle_message(std::size_t i, Variant variant) {
  CycleMessage m = peek_cycle_message(i, variant);
  if (i > current_) current_ = static_cast<CycleIndex>(i);
  return m;
}

DisclosureMessage TrustCenter::build_disclosure(std::size_t i, double bs_now) const {
  if (i < 1 || i > cycles()) throw Error(ErrorKind::chain_exhausted, "cycle index outside the key chains");
  // small slack for floating-point event times
  if (bs_now + 1e-9 < schedule_.at(i) + disclosure_delay_) {
    throw Error(ErrorKind::too_early, "K_Auth disclosed before T_BSi + t");
  }
  return {static_cast<CycleIndex>(i), auth_chain_.link(i)};
}

RevocationMessage TrustCenter::build_revocation(std::size_t i, std::vector<NodeId> ids) const {
  if (i < 1 || i > cycles()) throw Error(ErrorKind::chain_exhausted, "cycle index outside the key chains");
  RevocationMessage r;
  r.cycle = static_cast<CycleIndex>(i);
  r.ids = std::move(ids);
  r.tag = crypto::mac(auth_chain_.link(i), r.signed_body());
  return r;
}

}  // namespace wsnkm
