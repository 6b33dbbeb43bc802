#pragma once

#include <string>

#include "ssi/crypto.hpp"

namespace ssi {

enum class KeyState { Generated, Active, Lost, Compromised, Revoked, Recovered };

const char* key_state_name(KeyState s);
KeyState key_state_from_name(const std::string& name);

struct MasterKey {
  KeyPair keypair;
  KeyState state = KeyState::Active;
};

/// Relationship-scoped key derived from a master. The fingerprint links
/// it to its parent inside the owner's wallet only; it must never
/// appear in anything published, or two sub-keys of the same master
/// become linkable.
struct SubKey {
  std::string label;
  KeyPair keypair;
  Digest32 parent_fingerprint{};
  KeyState state = KeyState::Active;
};

MasterKey generate_master(std::span<const uint8_t> seed);

/// Child seed is H(master_seed || label), so derivation is
/// deterministic and labels separate key material.
SubKey derive_subkey(const MasterKey& master, const std::string& label);

}  // namespace ssi
