#include "wsnkm/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <algorithm>
#include <memory>

namespace wsnkm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_length: return "invalid-length";
    case ErrorKind::malformed_ciphertext: return "malformed-ciphertext";
    case ErrorKind::invalid_point: return "invalid-point";
    case ErrorKind::invalid_params: return "invalid-params";
    case ErrorKind::invalid_schedule: return "invalid-schedule";
    case ErrorKind::insufficient_chain: return "insufficient-chain";
    case ErrorKind::chain_exhausted: return "chain-exhausted";
    case ErrorKind::too_early: return "too-early";
    case ErrorKind::codec_range: return "codec-range";
    case ErrorKind::depleted: return "depleted";
    case ErrorKind::accounting: return "accounting";
    case ErrorKind::out_of_model: return "out-of-model";
    case ErrorKind::unknown_scheme: return "unknown-scheme";
    case ErrorKind::unknown_metric: return "unknown-metric";
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw Error(ErrorKind::parse, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorKind::parse, "bad hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

}  // namespace wsnkm

namespace wsnkm::crypto {

namespace {

struct CipherCtxFree {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxFree>;

Bytes run_cipher(const SymKey& key, ByteView in, bool encrypting) {
  static const std::uint8_t kZeroIv[kBlockOctets] = {};
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw std::bad_alloc();
  int ok = EVP_CipherInit_ex(ctx.get(), EVP_aes_128_cbc(), nullptr, key.bytes.data(),
                             kZeroIv, encrypting ? 1 : 0);
  ok = ok && EVP_CIPHER_CTX_set_padding(ctx.get(), 0);
  Bytes out(in.size() + kBlockOctets);
  int produced = 0;
  int tail = 0;
  ok = ok && EVP_CipherUpdate(ctx.get(), out.data(), &produced, in.data(),
                              static_cast<int>(in.size()));
  ok = ok && EVP_CipherFinal_ex(ctx.get(), out.data() + produced, &tail);
  if (!ok) throw std::runtime_error("AES-128-CBC operation failed");
  out.resize(static_cast<std::size_t>(produced + tail));
  return out;
}

}  // namespace

Digest hash(ByteView message) {
  Digest d;
  unsigned int len = 0;
  if (!EVP_Digest(message.data(), message.size(), d.bytes.data(), &len, EVP_sha1(), nullptr) ||
      len != kDigestOctets) {
    throw std::runtime_error("SHA-1 failed");
  }
  return d;
}

SymKey derive_link(const SymKey& k) {
  Digest d = hash(k.view());
  SymKey out;
  std::copy_n(d.bytes.begin(), kKeyOctets, out.bytes.begin());
  return out;
}

MacTag mac(const SymKey& key, ByteView message) {
  std::uint8_t full[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!HMAC(EVP_sha1(), key.bytes.data(), static_cast<int>(kKeyOctets), message.data(),
            message.size(), full, &len)) {
    throw std::runtime_error("HMAC-SHA1 failed");
  }
  MacTag tag;
  std::copy_n(full, kTagOctets, tag.bytes.begin());
  return tag;
}

Bytes pad_to_block(ByteView plaintext) {
  std::size_t blocks = std::max<std::size_t>(1, (plaintext.size() + kBlockOctets - 1) / kBlockOctets);
  Bytes out(blocks * kBlockOctets, 0);
  std::copy(plaintext.begin(), plaintext.end(), out.begin());
  return out;
}

Bytes encrypt(const SymKey& key, ByteView plaintext) {
  if (plaintext.empty() || plaintext.size() % kBlockOctets != 0) {
    throw Error(ErrorKind::invalid_length, "plaintext is not block aligned");
  }
  return run_cipher(key, plaintext, true);
}

Bytes decrypt(const SymKey& key, ByteView ciphertext) {
  if (ciphertext.empty() || ciphertext.size() % kBlockOctets != 0) {
    throw Error(ErrorKind::malformed_ciphertext, "ciphertext is not block aligned");
  }
  return run_cipher(key, ciphertext, false);
}

SymKey kdf_pairwise(ByteView shared, CycleIndex cycle) {
  Bytes input(shared.begin(), shared.end());
  append_u16(input, cycle);
  Digest d = hash(input);
  SymKey out;
  std::copy_n(d.bytes.begin(), kKeyOctets, out.bytes.begin());
  return out;
}

MacTag ack_token(const SymKey& k_ab, NodeId from, NodeId to) {
  Bytes msg{'A', 'C', 'K'};
  append_u16(msg, from);
  append_u16(msg, to);
  return mac(k_ab, msg);
}

bool verify_ack(const SymKey& k_ab, NodeId from, NodeId to, const MacTag& tag) {
  return ack_token(k_ab, from, to) == tag;
}

KeyChain KeyChain::generate(const SymKey& seed, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_length, "key chain length must be >= 1");
  std::vector<SymKey> links(n + 1);
  links[n] = seed;
  for (std::size_t i = n; i > 0; --i) links[i - 1] = derive_link(links[i]);
  return KeyChain(std::move(links));
}

std::size_t KeyChain::count_valid_links() const {
  std::size_t ok = 0;
  for (std::size_t i = 1; i < links_.size(); ++i) {
    if (derive_link(links_[i]) == links_[i - 1]) ++ok;
  }
  return ok;
}

std::size_t chain_distance(const SymKey& candidate, const SymKey& anchor,
                           std::size_t max_steps) {
  SymKey cur = candidate;
  for (std::size_t step = 1; step <= max_steps; ++step) {
    cur = derive_link(cur);
    if (cur == anchor) return step;
  }
  return 0;
}

}  // namespace wsnkm::crypto
