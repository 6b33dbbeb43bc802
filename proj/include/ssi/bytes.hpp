#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ssi {

using Bytes = std::vector<uint8_t>;
using Digest32 = std::array<uint8_t, 32>;
using Height = uint64_t;

std::string to_hex(std::span<const uint8_t> data);
Bytes from_hex(std::string_view hex);
Digest32 digest_from_hex(std::string_view hex);

/// RFC 4648 base32, lowercase alphabet, no padding.
std::string to_base32(std::span<const uint8_t> data);

/// RFC 4648 base64url, no padding.
std::string to_base64url(std::span<const uint8_t> data);

Bytes str_bytes(std::string_view s);
std::array<uint8_t, 8> u64_be(uint64_t v);
uint64_t u64_from_be(std::span<const uint8_t> b);

/// Canonical byte encoding used everywhere something is signed or hashed:
/// each field is appended as a u32 big-endian length followed by the raw
/// bytes, in declared field order. No framing beyond that.
class Encoder {
 public:
  Encoder& add(std::span<const uint8_t> field);
  Encoder& add(const std::string& field);
  Encoder& add(uint64_t field);  // encoded as an 8-byte big-endian field
  const Bytes& bytes() const { return buf_; }
  Bytes take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

/// Single deterministic random source. Every component that needs
/// randomness takes one of these by reference; nothing else in the
/// toolkit may introduce entropy. mt19937_64 output is fully specified
/// by the standard, so runs are reproducible across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }
  void fill(std::span<uint8_t> out);
  Bytes bytes(size_t n);
  Digest32 block32();

  /// Engine state as text, for persisting across CLI invocations.
  std::string save_state() const;
  void restore_state(const std::string& text);

 private:
  std::mt19937_64 eng_;
};

}  // namespace ssi
