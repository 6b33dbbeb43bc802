#pragma once

#include <optional>

#include "json.hpp"
#include "ssi/crypto.hpp"

namespace ssi {

using Json = nlohmann::json;

/// did:sim:<base32 of H(initial controller pubkey || salt)>, 52 chars.
/// The salt keeps identifiers of the same key unlinkable across
/// registrations and the digest binds the identifier to its first key.
std::string make_did(const PublicKey& controller,
                     std::span<const uint8_t> salt);
bool is_valid_did(const std::string& did);

struct ServiceEndpoint {
  std::string name;
  std::string endpoint;
};

struct SocialBinding {
  std::string profile_url;
  std::string post_url;
  Signature attribute_signature{};  // controller's signature over the binding
};

/// The signed form of a social binding attribute.
Bytes social_binding_bytes(const std::string& did,
                           const std::string& profile_url,
                           const std::string& post_url);

/// DID document. Stored off-ledger in the content store; the ledger
/// record only holds its content address.
struct DidDocument {
  std::string context = "https://www.w3.org/ns/did/v1";
  std::string id;
  PublicKey public_key{};
  std::vector<ServiceEndpoint> service;
  std::optional<SocialBinding> social;
  Json extra = Json::object();

  Json to_json() const;
  static DidDocument from_json(const Json& j);
  Bytes canonical_bytes() const;
  Digest32 address() const;  // content address of the canonical form
};

}  // namespace ssi
