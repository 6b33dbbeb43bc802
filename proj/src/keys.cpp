#include "ssi/keys.hpp"

#include "ssi/errors.hpp"

namespace ssi {

const char* key_state_name(KeyState s) {
  switch (s) {
    case KeyState::Generated: return "Generated";
    case KeyState::Active: return "Active";
    case KeyState::Lost: return "Lost";
    case KeyState::Compromised: return "Compromised";
    case KeyState::Revoked: return "Revoked";
    case KeyState::Recovered: return "Recovered";
  }
  return "Unknown";
}

KeyState key_state_from_name(const std::string& name) {
  for (KeyState s : {KeyState::Generated, KeyState::Active, KeyState::Lost,
                     KeyState::Compromised, KeyState::Revoked,
                     KeyState::Recovered}) {
    if (name == key_state_name(s)) return s;
  }
  fail(Errc::ParseError, "unknown key state '" + name + "'");
}

MasterKey generate_master(std::span<const uint8_t> seed) {
  MasterKey mk;
  mk.keypair = keypair_from_seed(seed);
  return mk;
}

SubKey derive_subkey(const MasterKey& master, const std::string& label) {
  if (label.empty()) fail(Errc::EmptyLabel, "sub-key label is empty");
  if (master.state != KeyState::Active) {
    fail(Errc::KeyNotActive, "master key is not active");
  }
  Bytes material(master.keypair.seed.begin(), master.keypair.seed.end());
  Bytes label_bytes = str_bytes(label);
  material.insert(material.end(), label_bytes.begin(), label_bytes.end());
  Digest32 child_seed = sha256(material);

  SubKey sk;
  sk.label = label;
  sk.keypair = keypair_from_seed(child_seed);
  sk.parent_fingerprint = sha256(master.keypair.pub);
  return sk;
}

}  // namespace ssi
