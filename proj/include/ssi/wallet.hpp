#pragma once

#include <map>
#include <vector>

#include "json.hpp"
#include "ssi/keys.hpp"

namespace ssi {

using Json = nlohmann::json;

enum class WalletKind { Hot, Cold };
enum class KeyRole { Master, Sub };

/// What a signature is for. The wallet enforces the master-key policy:
/// master keys only ever sign registry updates and recovery traffic,
/// day-to-day signing goes through sub-keys.
enum class SignPurpose {
  RegistryUpdate,
  Recovery,
  Credential,
  Presentation,
  LinkControl,
  General,
};

struct WalletEntry {
  std::string name;
  KeyRole role = KeyRole::Sub;
  std::string label;  // sub-keys: the relationship this key is scoped to
  KeyPair keypair;
  Digest32 parent_fingerprint{};
  KeyState state = KeyState::Active;
};

/// Key container. A hot wallet is always online; a cold wallet signs
/// only while explicitly connected, which is how master keys stay off
/// the network between registry updates.
class Wallet {
 public:
  explicit Wallet(WalletKind kind)
      : kind_(kind), connected_(kind == WalletKind::Hot) {}

  WalletKind kind() const { return kind_; }
  bool connected() const { return connected_; }
  void connect();
  void disconnect();

  void add_master(const std::string& name, const MasterKey& key);
  void add_subkey(const std::string& name, const SubKey& key);

  const WalletEntry& entry(const std::string& name) const;
  void set_state(const std::string& name, KeyState state);

  const PublicKey& pub(const std::string& name) const;
  Signature sign(const std::string& name, std::span<const uint8_t> message,
                 SignPurpose purpose) const;

  std::vector<std::string> names() const;
  bool has(const std::string& name) const;

  // Seeds included; wallet dumps are for local state files only.
  Json to_json() const;
  static Wallet from_json(const Json& j);

 private:
  WalletEntry& entry_mut(const std::string& name);

  WalletKind kind_;
  bool connected_;
  std::map<std::string, WalletEntry> entries_;
};

}  // namespace ssi
