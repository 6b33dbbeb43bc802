#include "ssi/shards.hpp"

#include <algorithm>
#include <set>

#include "ssi/errors.hpp"

namespace ssi {

namespace {

// GF(2^8) with the AES reduction polynomial x^8 + x^4 + x^3 + x + 1.
// Log/antilog tables over generator 0x03, built once.
struct GfTables {
  uint8_t exp[512];
  uint8_t log[256];

  GfTables() {
    uint8_t x = 1;
    for (int i = 0; i < 255; ++i) {
      exp[i] = x;
      log[x] = static_cast<uint8_t>(i);
      // multiply x by the generator 0x03 = x * 2 + x
      uint8_t x2 = static_cast<uint8_t>((x << 1) ^ ((x & 0x80) ? 0x1b : 0));
      x = static_cast<uint8_t>(x2 ^ x);
    }
    for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
    log[0] = 0;  // never read; gf_mul and gf_inv guard zero explicitly
  }
};

const GfTables& gf() {
  static const GfTables tables;
  return tables;
}

uint8_t gf_mul(uint8_t a, uint8_t b) {
  if (a == 0 || b == 0) return 0;
  const GfTables& t = gf();
  return t.exp[t.log[a] + t.log[b]];
}

uint8_t gf_inv(uint8_t a) {
  // a != 0 holds at every call site: divisors are xor-distances of
  // distinct shard indices.
  const GfTables& t = gf();
  return t.exp[255 - t.log[a]];
}

// Evaluate the polynomial with the given coefficients at x via Horner.
// coeffs[0] is the secret byte, higher entries are random.
uint8_t poly_eval(std::span<const uint8_t> coeffs, uint8_t x) {
  uint8_t acc = 0;
  for (size_t i = coeffs.size(); i-- > 0;) {
    acc = static_cast<uint8_t>(gf_mul(acc, x) ^ coeffs[i]);
  }
  return acc;
}

}  // namespace

std::vector<KeyShard> split_secret(std::span<const uint8_t> secret, unsigned t,
                                   unsigned n, Rng& rng) {
  if (t < 1 || t > n || n > 255) {
    fail(Errc::BadThreshold, "need 1 <= t <= n <= 255");
  }
  if (secret.empty()) fail(Errc::BadThreshold, "secret is empty");

  Digest32 digest = sha256(secret);
  std::vector<KeyShard> shards(n);
  for (unsigned i = 0; i < n; ++i) {
    shards[i].index = static_cast<uint8_t>(i + 1);
    shards[i].threshold = static_cast<uint8_t>(t);
    shards[i].payload.resize(secret.size());
    shards[i].secret_digest = digest;
  }

  // One degree-(t-1) polynomial per secret byte.
  std::vector<uint8_t> coeffs(t);
  for (size_t byte = 0; byte < secret.size(); ++byte) {
    coeffs[0] = secret[byte];
    if (t > 1) rng.fill(std::span<uint8_t>(coeffs.data() + 1, t - 1));
    for (unsigned i = 0; i < n; ++i) {
      shards[i].payload[byte] = poly_eval(coeffs, shards[i].index);
    }
  }
  return shards;
}

Bytes reconstruct_secret(const std::vector<KeyShard>& shards) {
  if (shards.empty()) fail(Errc::NotEnoughShards, "no shards given");

  const KeyShard& first = shards.front();
  unsigned t = first.threshold;
  for (const KeyShard& s : shards) {
    if (s.threshold != first.threshold ||
        s.secret_digest != first.secret_digest ||
        s.payload.size() != first.payload.size()) {
      fail(Errc::MixedSplits, "shards come from different splits");
    }
  }

  // First t distinct indices, in the order given.
  std::vector<const KeyShard*> use;
  std::set<uint8_t> seen;
  for (const KeyShard& s : shards) {
    if (seen.insert(s.index).second) {
      use.push_back(&s);
      if (use.size() == t) break;
    }
  }
  if (use.size() < t) {
    fail(Errc::NotEnoughShards, "have " + std::to_string(use.size()) +
                                    " distinct shards, need " +
                                    std::to_string(t));
  }

  // Lagrange basis at x = 0; in GF(2^8) subtraction is xor.
  std::vector<uint8_t> basis(t);
  for (unsigned j = 0; j < t; ++j) {
    uint8_t acc = 1;
    for (unsigned m = 0; m < t; ++m) {
      if (m == j) continue;
      uint8_t xm = use[m]->index;
      uint8_t xj = use[j]->index;
      acc = gf_mul(acc, gf_mul(xm, gf_inv(static_cast<uint8_t>(xm ^ xj))));
    }
    basis[j] = acc;
  }

  Bytes secret(first.payload.size());
  for (size_t byte = 0; byte < secret.size(); ++byte) {
    uint8_t acc = 0;
    for (unsigned j = 0; j < t; ++j) {
      acc = static_cast<uint8_t>(acc ^ gf_mul(basis[j], use[j]->payload[byte]));
    }
    secret[byte] = acc;
  }

  if (sha256(secret) != first.secret_digest) {
    fail(Errc::DigestMismatch, "reconstructed secret fails its digest check");
  }
  return secret;
}

std::string shard_to_line(const KeyShard& shard) {
  Bytes raw;
  raw.reserve(2 + shard.payload.size() + shard.secret_digest.size());
  raw.push_back(shard.index);
  raw.push_back(shard.threshold);
  raw.insert(raw.end(), shard.payload.begin(), shard.payload.end());
  raw.insert(raw.end(), shard.secret_digest.begin(), shard.secret_digest.end());
  return to_hex(raw);
}

KeyShard shard_from_line(const std::string& line) {
  Bytes raw = from_hex(line);
  if (raw.size() < 2 + 1 + 32) fail(Errc::ParseError, "shard line too short");
  KeyShard s;
  s.index = raw[0];
  s.threshold = raw[1];
  s.payload.assign(raw.begin() + 2, raw.end() - 32);
  std::copy(raw.end() - 32, raw.end(), s.secret_digest.begin());
  if (s.index == 0) fail(Errc::ParseError, "shard index 0 is reserved");
  return s;
}

}  // namespace ssi
