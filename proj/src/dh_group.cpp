#include "wsnkm/dh_group.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>

#include <memory>

namespace wsnkm {

std::string_view to_string(GroupBackend backend) {
  return backend == GroupBackend::toy ? "toy" : "ecc160";
}

GroupBackend parse_backend(std::string_view name) {
  if (name == "toy" || name == "toy-group") return GroupBackend::toy;
  if (name == "ecc160" || name == "ecc-160") return GroupBackend::ecc160;
  throw Error(ErrorKind::parse, "unknown group backend: " + std::string(name));
}

namespace {

Bytes be_bytes(std::uint64_t v, std::size_t width) {
  Bytes out(width);
  for (std::size_t i = 0; i < width; ++i) out[width - 1 - i] = static_cast<std::uint8_t>(v >> (8 * i));
  return out;
}

std::uint64_t from_be(ByteView in) {
  if (in.size() > 8) throw Error(ErrorKind::invalid_params, "integer wider than 64 bits");
  std::uint64_t v = 0;
  for (auto b : in) v = (v << 8) | b;
  return v;
}

std::size_t octets_for(std::uint64_t v) {
  std::size_t n = 0;
  while (v) {
    ++n;
    v >>= 8;
  }
  return n == 0 ? 1 : n;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

class ToyGroup final : public DhGroup {
 public:
  explicit ToyGroup(GroupParams params) : params_(std::move(params)) {
    prime_ = from_be(params_.order);
    generator_ = from_be(params_.generator);
    if (prime_ < 3 || prime_ >= (1ULL << 63) || !is_prime(prime_)) {
      throw Error(ErrorKind::invalid_params, "toy group modulus must be an odd prime < 2^63");
    }
    if (generator_ <= 1 || generator_ >= prime_) {
      throw Error(ErrorKind::invalid_params, "toy group generator out of range");
    }
    width_ = octets_for(prime_ - 1);
  }

  const GroupParams& params() const override { return params_; }
  std::size_t public_octets() const override { return width_; }

  DhKeyPair keygen(Rng& rng) const override {
    return from_scalar(rng() % (prime_ - 1) + 1);
  }

  DhKeyPair from_private(ByteView private_key) const override {
    std::uint64_t raw = 0;
    for (auto b : private_key) raw = static_cast<std::uint64_t>((static_cast<unsigned __int128>(raw) * 256 + b) % (prime_ - 1));
    return from_scalar(raw == 0 ? prime_ - 1 : raw);
  }

  bool is_valid_public(ByteView peer) const override {
    if (peer.size() != width_) return false;
    std::uint64_t y = from_be(peer);
    return y > 1 && y < prime_;
  }

  Bytes shared(ByteView private_key, ByteView peer_public) const override {
    if (!is_valid_public(peer_public)) throw Error(ErrorKind::invalid_point, "invalid toy-group element");
    return be_bytes(powmod(from_be(peer_public), from_be(private_key), prime_), width_);
  }

 private:
  DhKeyPair from_scalar(std::uint64_t x) const {
    return {be_bytes(powmod(generator_, x, prime_), width_), be_bytes(x, width_)};
  }

  GroupParams params_;
  std::uint64_t prime_ = 0;
  std::uint64_t generator_ = 0;
  std::size_t width_ = 0;
};

struct BnFree {
  void operator()(BIGNUM* b) const { BN_clear_free(b); }
};
struct BnCtxFree {
  void operator()(BN_CTX* c) const { BN_CTX_free(c); }
};
struct PointFree {
  void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};
struct GroupFree {
  void operator()(EC_GROUP* g) const { EC_GROUP_free(g); }
};
using Bn = std::unique_ptr<BIGNUM, BnFree>;
using BnCtx = std::unique_ptr<BN_CTX, BnCtxFree>;
using Point = std::unique_ptr<EC_POINT, PointFree>;
using EcGroup = std::unique_ptr<EC_GROUP, GroupFree>;

constexpr std::size_t kEccScalarOctets = 21;
constexpr std::size_t kEccPublicOctets = 21;
constexpr std::size_t kEccSharedOctets = 20;

EcGroup new_secp160r1() {
  EcGroup g(EC_GROUP_new_by_curve_name(NID_secp160r1));
  if (!g) throw Error(ErrorKind::invalid_params, "secp160r1 unavailable in this OpenSSL build");
  return g;
}

Bytes encode_point(const EC_GROUP* group, const EC_POINT* p, BN_CTX* ctx) {
  Bytes out(kEccPublicOctets);
  std::size_t n = EC_POINT_point2oct(group, p, POINT_CONVERSION_COMPRESSED, out.data(), out.size(), ctx);
  if (n != kEccPublicOctets) throw std::runtime_error("point encoding failed");
  return out;
}

class Ecc160Group final : public DhGroup {
 public:
  explicit Ecc160Group(GroupParams params) : params_(std::move(params)), group_(new_secp160r1()) {
    order_.reset(BN_dup(EC_GROUP_get0_order(group_.get())));
  }

  const GroupParams& params() const override { return params_; }
  std::size_t public_octets() const override { return kEccPublicOctets; }

  DhKeyPair keygen(Rng& rng) const override {
    Bytes raw(kEccScalarOctets + 8);
    for (std::size_t i = 0; i < raw.size(); i += 8) {
      std::uint64_t v = rng();
      for (std::size_t j = 0; j < 8 && i + j < raw.size(); ++j) raw[i + j] = static_cast<std::uint8_t>(v >> (8 * j));
    }
    return from_private(raw);
  }

  DhKeyPair from_private(ByteView private_key) const override {
    BnCtx ctx(BN_CTX_new());
    Bn k(BN_bin2bn(private_key.data(), static_cast<int>(private_key.size()), nullptr));
    Bn order_minus_one(BN_dup(order_.get()));
    BN_sub_word(order_minus_one.get(), 1);
    // k -> (k mod (order - 1)) + 1, i.e. into [1, order - 1]
    BN_nnmod(k.get(), k.get(), order_minus_one.get(), ctx.get());
    BN_add_word(k.get(), 1);
    Point pub(EC_POINT_new(group_.get()));
    if (!EC_POINT_mul(group_.get(), pub.get(), k.get(), nullptr, nullptr, ctx.get())) {
      throw std::runtime_error("EC scalar multiplication failed");
    }
    Bytes priv(kEccScalarOctets);
    BN_bn2binpad(k.get(), priv.data(), static_cast<int>(priv.size()));
    return {encode_point(group_.get(), pub.get(), ctx.get()), std::move(priv)};
  }

  bool is_valid_public(ByteView peer) const override {
    BnCtx ctx(BN_CTX_new());
    return decode(peer, ctx.get()) != nullptr;
  }

  Bytes shared(ByteView private_key, ByteView peer_public) const override {
    BnCtx ctx(BN_CTX_new());
    Point peer = decode(peer_public, ctx.get());
    if (!peer) throw Error(ErrorKind::invalid_point, "invalid secp160r1 point");
    Bn k(BN_bin2bn(private_key.data(), static_cast<int>(private_key.size()), nullptr));
    Point out(EC_POINT_new(group_.get()));
    if (!EC_POINT_mul(group_.get(), out.get(), nullptr, peer.get(), k.get(), ctx.get()) ||
        EC_POINT_is_at_infinity(group_.get(), out.get())) {
      throw Error(ErrorKind::invalid_point, "degenerate shared point");
    }
    Bn x(BN_new());
    EC_POINT_get_affine_coordinates(group_.get(), out.get(), x.get(), nullptr, ctx.get());
    Bytes secret(kEccSharedOctets);
    BN_bn2binpad(x.get(), secret.data(), static_cast<int>(secret.size()));
    return secret;
  }

 private:
  Point decode(ByteView enc, BN_CTX* ctx) const {
    if (enc.size() != kEccPublicOctets) return nullptr;
    Point p(EC_POINT_new(group_.get()));
    if (!EC_POINT_oct2point(group_.get(), p.get(), enc.data(), enc.size(), ctx)) return nullptr;
    if (EC_POINT_is_at_infinity(group_.get(), p.get())) return nullptr;
    if (EC_POINT_is_on_curve(group_.get(), p.get(), ctx) != 1) return nullptr;
    return p;
  }

  GroupParams params_;
  EcGroup group_;
  Bn order_;
};

}  // namespace

GroupParams GroupParams::toy(std::uint64_t prime, std::uint64_t generator) {
  std::size_t w = octets_for(prime);
  return {GroupBackend::toy, be_bytes(prime, w), be_bytes(generator, w)};
}

GroupParams GroupParams::default_toy() {
  // Mersenne prime 2^61 - 1; 37 generates the full multiplicative group.
  return toy((1ULL << 61) - 1, 37);
}

GroupParams GroupParams::ecc160() {
  EcGroup g = new_secp160r1();
  BnCtx ctx(BN_CTX_new());
  const BIGNUM* order = EC_GROUP_get0_order(g.get());
  Bytes ord(static_cast<std::size_t>(BN_num_bytes(order)));
  BN_bn2bin(order, ord.data());
  return {GroupBackend::ecc160, std::move(ord),
          encode_point(g.get(), EC_GROUP_get0_generator(g.get()), ctx.get())};
}

GroupParams GroupParams::for_backend(GroupBackend backend) {
  return backend == GroupBackend::toy ? default_toy() : ecc160();
}

std::shared_ptr<const DhGroup> make_group(const GroupParams& params) {
  if (params.backend == GroupBackend::toy) return std::make_shared<ToyGroup>(params);
  return std::make_shared<Ecc160Group>(params);
}

}  // namespace wsnkm
