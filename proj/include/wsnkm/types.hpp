#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wsnkm {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Sensor node identifier (2 octets on the wire).
using NodeId = std::uint16_t;
/// Authentication cycle index (10 bits on the wire).
using CycleIndex = std::uint16_t;

inline constexpr NodeId kBaseStationId = 0xFFFF;
inline constexpr NodeId kAdversaryId = 0xFFFE;

inline constexpr std::size_t kKeyOctets = 16;
inline constexpr std::size_t kDigestOctets = 20;
inline constexpr std::size_t kTagOctets = 16;

template <std::size_t N>
struct FixedOctets {
  std::array<std::uint8_t, N> bytes{};

  static constexpr std::size_t size() { return N; }
  ByteView view() const { return {bytes.data(), N}; }
  auto begin() const { return bytes.begin(); }
  auto end() const { return bytes.end(); }

  friend auto operator<=>(const FixedOctets&, const FixedOctets&) = default;
};

struct SymKey : FixedOctets<kKeyOctets> {};
struct Digest : FixedOctets<kDigestOctets> {};
struct MacTag : FixedOctets<kTagOctets> {};

enum class ErrorKind {
  invalid_length,
  malformed_ciphertext,
  invalid_point,
  invalid_params,
  invalid_schedule,
  insufficient_chain,
  chain_exhausted,
  too_early,
  codec_range,
  depleted,
  accounting,
  out_of_model,
  unknown_scheme,
  unknown_metric,
  parse,
  validation,
  io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

std::string to_hex(ByteView bytes);
Bytes from_hex(std::string_view hex);

template <std::size_t N>
std::string to_hex(const FixedOctets<N>& v) {
  return to_hex(v.view());
}

inline void append(Bytes& out, ByteView more) {
  out.insert(out.end(), more.begin(), more.end());
}

inline void append_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

inline std::uint16_t read_u16(ByteView in, std::size_t at) {
  return static_cast<std::uint16_t>((in[at] << 8) | in[at + 1]);
}

}  // namespace wsnkm
