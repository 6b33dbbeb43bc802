#pragma once

#include "ssi/bytes.hpp"

namespace ssi {

using Seed32 = std::array<uint8_t, 32>;
using PublicKey = std::array<uint8_t, 32>;
using Signature = std::array<uint8_t, 64>;

Digest32 sha256(std::span<const uint8_t> data);

struct KeyPair {
  Seed32 seed{};
  PublicKey pub{};
};

/// Ed25519 keypair from a 32-byte seed. Same seed, same keypair.
KeyPair keypair_from_seed(std::span<const uint8_t> seed);

/// Ed25519 is deterministic: signing the same message with the same
/// seed always yields the same 64 bytes.
Signature ed25519_sign(const Seed32& seed, std::span<const uint8_t> message);
bool ed25519_verify(const PublicKey& pub, std::span<const uint8_t> message,
                    const Signature& sig);

}  // namespace ssi
