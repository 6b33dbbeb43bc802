#include "ssi/bytes.hpp"

#include <sstream>

#include "ssi/errors.hpp"

namespace ssi {

namespace {

constexpr char kHex[] = "0123456789abcdef";
constexpr char kBase32[] = "abcdefghijklmnopqrstuvwxyz234567";
constexpr char kBase64Url[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_hex(std::span<const uint8_t> data) {
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) fail(Errc::ParseError, "hex string has odd length");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_nibble(hex[i]);
    int lo = hex_nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) fail(Errc::ParseError, "invalid hex digit");
    out.push_back(static_cast<uint8_t>((hi << 4) | lo));
  }
  return out;
}

Digest32 digest_from_hex(std::string_view hex) {
  Bytes raw = from_hex(hex);
  if (raw.size() != 32) fail(Errc::ParseError, "digest must be 32 bytes");
  Digest32 d{};
  std::copy(raw.begin(), raw.end(), d.begin());
  return d;
}

std::string to_base32(std::span<const uint8_t> data) {
  std::string out;
  out.reserve((data.size() * 8 + 4) / 5);
  uint32_t acc = 0;
  int bits = 0;
  for (uint8_t b : data) {
    acc = (acc << 8) | b;
    bits += 8;
    while (bits >= 5) {
      bits -= 5;
      out.push_back(kBase32[(acc >> bits) & 0x1f]);
    }
  }
  if (bits > 0) out.push_back(kBase32[(acc << (5 - bits)) & 0x1f]);
  return out;
}

std::string to_base64url(std::span<const uint8_t> data) {
  std::string out;
  out.reserve((data.size() * 4 + 2) / 3);
  uint32_t acc = 0;
  int bits = 0;
  for (uint8_t b : data) {
    acc = (acc << 8) | b;
    bits += 8;
    while (bits >= 6) {
      bits -= 6;
      out.push_back(kBase64Url[(acc >> bits) & 0x3f]);
    }
  }
  if (bits > 0) out.push_back(kBase64Url[(acc << (6 - bits)) & 0x3f]);
  return out;
}

Bytes str_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

std::array<uint8_t, 8> u64_be(uint64_t v) {
  std::array<uint8_t, 8> out{};
  for (int i = 7; i >= 0; --i) {
    out[i] = static_cast<uint8_t>(v & 0xff);
    v >>= 8;
  }
  return out;
}

uint64_t u64_from_be(std::span<const uint8_t> b) {
  if (b.size() != 8) fail(Errc::ParseError, "u64 field must be 8 bytes");
  uint64_t v = 0;
  for (uint8_t x : b) v = (v << 8) | x;
  return v;
}

Encoder& Encoder::add(std::span<const uint8_t> field) {
  uint32_t n = static_cast<uint32_t>(field.size());
  buf_.push_back(static_cast<uint8_t>(n >> 24));
  buf_.push_back(static_cast<uint8_t>(n >> 16));
  buf_.push_back(static_cast<uint8_t>(n >> 8));
  buf_.push_back(static_cast<uint8_t>(n));
  buf_.insert(buf_.end(), field.begin(), field.end());
  return *this;
}

Encoder& Encoder::add(const std::string& field) {
  return add(std::span<const uint8_t>(
      reinterpret_cast<const uint8_t*>(field.data()), field.size()));
}

Encoder& Encoder::add(uint64_t field) {
  auto be = u64_be(field);
  return add(std::span<const uint8_t>(be));
}

void Rng::fill(std::span<uint8_t> out) {
  size_t i = 0;
  while (i < out.size()) {
    uint64_t v = eng_();
    for (int k = 0; k < 8 && i < out.size(); ++k, ++i) {
      out[i] = static_cast<uint8_t>(v >> (8 * k));
    }
  }
}

Bytes Rng::bytes(size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

Digest32 Rng::block32() {
  Digest32 out{};
  fill(out);
  return out;
}

std::string Rng::save_state() const {
  std::ostringstream os;
  os << eng_;
  return os.str();
}

void Rng::restore_state(const std::string& text) {
  std::istringstream is(text);
  is >> eng_;
  if (is.fail()) fail(Errc::ParseError, "bad rng state");
}

}  // namespace ssi
