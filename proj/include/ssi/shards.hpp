#pragma once

#include "ssi/crypto.hpp"

namespace ssi {

/// One share of a secret split with Shamir threshold sharing over
/// GF(2^8). `payload` holds one field element per secret byte, all
/// evaluated at x = index. `secret_digest` ties shards of the same
/// split together and lets reconstruction verify its own output.
struct KeyShard {
  uint8_t index = 0;      // x coordinate, 1..255, never 0
  uint8_t threshold = 0;  // shards needed to reconstruct
  Bytes payload;
  Digest32 secret_digest{};
};

/// Split `secret` into n shards, any t of which reconstruct it and any
/// t-1 of which reveal nothing. Coefficients come from `rng`, so a
/// given seed always produces the same shards.
std::vector<KeyShard> split_secret(std::span<const uint8_t> secret, unsigned t,
                                   unsigned n, Rng& rng);

/// Rebuild the secret from at least `threshold` shards of one split.
/// Extra shards beyond the threshold are accepted; the first t distinct
/// indices are used. The result is checked against `secret_digest`.
Bytes reconstruct_secret(const std::vector<KeyShard>& shards);

/// Hex armor for offline storage, one shard per line:
/// index(1) || threshold(1) || payload || secret_digest(32).
std::string shard_to_line(const KeyShard& shard);
KeyShard shard_from_line(const std::string& line);

}  // namespace ssi
