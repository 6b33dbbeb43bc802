#pragma once

#include <map>
#include <set>

#include "ssi/registry.hpp"

namespace ssi {

/// How claims are laid out across credentials.
///   Plain:     every claim in one credential, values in the clear.
///   Atomic:    one credential per claim, so the holder can show any
///              subset without dragging the rest along.
///   Hashed:    one credential, each value replaced by a salted digest;
///              values travel separately and are revealed per name.
///   Predicate: a single derived claim ("age>=18": true) attested by
///              the issuer; the source value never leaves the issuer.
enum class CredScheme { Plain, Atomic, Hashed, Predicate };

const char* cred_scheme_name(CredScheme s);
CredScheme cred_scheme_from_name(const std::string& name);

struct Claim {
  std::string name;
  std::string value;
};

struct SaltedAttribute {
  std::string name;
  Digest32 digest{};  // H(name || 0x1f || value || 0x1f || nonce)
};

Digest32 salted_attribute_digest(const std::string& name,
                                 const std::string& value,
                                 std::span<const uint8_t> nonce);

struct Credential {
  Digest32 cred_id{};
  std::string issuer_did;
  std::string holder_did;
  CredScheme scheme = CredScheme::Plain;
  std::vector<Claim> claims;                // Plain, Atomic, Predicate
  std::vector<SaltedAttribute> attributes;  // Hashed
  Height issued_at = 0;
  Signature issuer_signature{};

  Bytes signable_bytes() const;  // cred_id is the hash of this
  Json to_json() const;
  static Credential from_json(const Json& j);
};

/// Disclosure material the holder keeps private per hashed attribute.
struct DisclosureSecret {
  std::string value;
  Bytes nonce;
};

struct IssueResult {
  std::vector<Credential> credentials;
  // Hashed scheme only; handed to the holder, never to verifiers.
  std::map<std::string, DisclosureSecret> secrets;
};

IssueResult issue(DidRegistry& registry, Wallet& wallet,
                  const std::string& key, const std::string& issuer_did,
                  const std::string& holder_did,
                  const std::vector<Claim>& claims, CredScheme scheme,
                  Rng& rng);

/// Issue a predicate credential from one source claim the issuer holds.
/// Predicates look like "age>=18"; supported operators: >= <= ==.
Credential issue_predicate(DidRegistry& registry, Wallet& wallet,
                           const std::string& key,
                           const std::string& issuer_did,
                           const std::string& holder_did, const Claim& source,
                           const std::string& predicate);

struct DisclosedAttribute {
  std::string name;
  std::string value;
  Bytes nonce;
};

struct Presentation {
  Credential credential;  // Hashed credential as issued
  std::vector<DisclosedAttribute> disclosed;
  std::string audience;  // verifier DID this presentation is scoped to
  Signature holder_signature{};

  Bytes signable_bytes() const;
  Json to_json() const;
  static Presentation from_json(const Json& j);
};

Presentation make_presentation(
    DidRegistry& registry, Wallet& wallet, const std::string& key,
    const Credential& credential,
    const std::map<std::string, DisclosureSecret>& secrets,
    const std::set<std::string>& disclose, const std::string& audience);

/// Verification never throws; everything a verifier could object to is
/// a field in the report.
struct PresentationReport {
  bool scheme_ok = false;
  bool cred_id_ok = false;
  bool issuer_sig_ok = false;
  bool holder_sig_ok = false;
  bool audience_ok = false;
  bool digests_ok = false;
  bool not_revoked = false;
  std::vector<std::string> undisclosed;  // names left as digests
  std::vector<std::string> failures;

  bool valid() const {
    return scheme_ok && cred_id_ok && issuer_sig_ok && holder_sig_ok &&
           audience_ok && digests_ok && not_revoked;
  }
};

PresentationReport verify_presentation(const DidRegistry& registry,
                                       const Presentation& presentation,
                                       const std::string& audience);

/// Check a Plain, Atomic or Predicate credential directly (no selective
/// disclosure involved).
PresentationReport verify_credential(const DidRegistry& registry,
                                     const Credential& credential);

Digest32 revoke_credential(DidRegistry& registry, Wallet& wallet,
                           const std::string& key,
                           const Credential& credential);

bool is_revoked(const DidRegistry& registry, const Credential& credential);

}  // namespace ssi
