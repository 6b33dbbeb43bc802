#include "ssi/wallet.hpp"

#include "ssi/errors.hpp"

namespace ssi {

void Wallet::connect() {
  if (kind_ != WalletKind::Cold) {
    fail(Errc::NotAColdWallet, "hot wallets are always online");
  }
  connected_ = true;
}

void Wallet::disconnect() {
  if (kind_ != WalletKind::Cold) {
    fail(Errc::NotAColdWallet, "hot wallets cannot go offline");
  }
  connected_ = false;
}

void Wallet::add_master(const std::string& name, const MasterKey& key) {
  WalletEntry e;
  e.name = name;
  e.role = KeyRole::Master;
  e.keypair = key.keypair;
  e.state = key.state;
  entries_[name] = std::move(e);
}

void Wallet::add_subkey(const std::string& name, const SubKey& key) {
  WalletEntry e;
  e.name = name;
  e.role = KeyRole::Sub;
  e.label = key.label;
  e.keypair = key.keypair;
  e.parent_fingerprint = key.parent_fingerprint;
  e.state = key.state;
  entries_[name] = std::move(e);
}

const WalletEntry& Wallet::entry(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    fail(Errc::KeyMissing, "no key '" + name + "' in wallet");
  }
  return it->second;
}

WalletEntry& Wallet::entry_mut(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    fail(Errc::KeyMissing, "no key '" + name + "' in wallet");
  }
  return it->second;
}

void Wallet::set_state(const std::string& name, KeyState state) {
  entry_mut(name).state = state;
}

const PublicKey& Wallet::pub(const std::string& name) const {
  return entry(name).keypair.pub;
}

Signature Wallet::sign(const std::string& name,
                       std::span<const uint8_t> message,
                       SignPurpose purpose) const {
  if (!connected_) {
    fail(Errc::ColdWalletOffline, "cold wallet is not connected");
  }
  const WalletEntry& e = entry(name);
  if (e.state != KeyState::Active) {
    fail(Errc::KeyNotActive,
         "key '" + name + "' is " + key_state_name(e.state));
  }
  if (e.role == KeyRole::Master && purpose != SignPurpose::RegistryUpdate &&
      purpose != SignPurpose::Recovery) {
    fail(Errc::MasterKeyPolicy,
         "master keys sign registry and recovery traffic only");
  }
  return ed25519_sign(e.keypair.seed, message);
}

std::vector<std::string> Wallet::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, entry] : entries_) out.push_back(name);
  return out;
}

bool Wallet::has(const std::string& name) const {
  return entries_.count(name) > 0;
}

Json Wallet::to_json() const {
  Json keys = Json::array();
  for (const auto& [name, e] : entries_) {
    keys.push_back({{"name", e.name},
                    {"role", e.role == KeyRole::Master ? "master" : "sub"},
                    {"label", e.label},
                    {"seed", to_hex(e.keypair.seed)},
                    {"parent_fingerprint", to_hex(e.parent_fingerprint)},
                    {"state", key_state_name(e.state)}});
  }
  return {{"kind", kind_ == WalletKind::Cold ? "cold" : "hot"},
          {"connected", connected_},
          {"keys", std::move(keys)}};
}

Wallet Wallet::from_json(const Json& j) {
  Wallet w(j.at("kind").get<std::string>() == "cold" ? WalletKind::Cold
                                                     : WalletKind::Hot);
  w.connected_ = j.at("connected").get<bool>();
  for (const Json& kj : j.at("keys")) {
    WalletEntry e;
    e.name = kj.at("name").get<std::string>();
    e.role = kj.at("role").get<std::string>() == "master" ? KeyRole::Master
                                                          : KeyRole::Sub;
    e.label = kj.at("label").get<std::string>();
    Bytes seed = from_hex(kj.at("seed").get<std::string>());
    e.keypair = keypair_from_seed(seed);
    e.parent_fingerprint =
        digest_from_hex(kj.at("parent_fingerprint").get<std::string>());
    e.state = key_state_from_name(kj.at("state").get<std::string>());
    w.entries_[e.name] = std::move(e);
  }
  return w;
}

}  // namespace ssi
