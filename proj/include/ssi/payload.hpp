#pragma once

#include <variant>

#include "json.hpp"
#include "ssi/crypto.hpp"

namespace ssi {

using Json = nlohmann::json;

// Everything the ledger can carry. Payloads serialize to canonical JSON
// (sorted keys, no whitespace) and that byte string is what gets
// length-prefixed into signatures and transaction ids.

struct RegisterDidPayload {
  std::string did;
  Bytes salt;               // 16 bytes mixed into the identifier digest
  PublicKey controller{};
  Digest32 ddo_address{};   // content store address of the document
};

struct UpdatePointerPayload {
  std::string did;
  Digest32 new_address{};
};

struct SetDelegatesPayload {
  std::string did;
  std::vector<std::string> delegates;  // delegate DIDs
  uint32_t threshold = 0;
  Height timelock_blocks = 0;
};

struct ProposeRecoveryPayload {
  std::string did;
  PublicKey new_controller{};
  uint64_t sequence = 0;  // per-DID proposal counter, fixes the proposal id
};

struct ApproveRecoveryPayload {
  std::string proposal_id;  // hex digest
  std::string delegate_did;
};

struct FinalizeRecoveryPayload {
  std::string proposal_id;
};

struct CancelRecoveryPayload {
  std::string proposal_id;
};

struct RevokeDidPayload {
  std::string did;
};

struct RevokeCredentialPayload {
  std::string cred_id;  // hex digest
  std::string issuer_did;
};

struct AnchorRootPayload {
  Digest32 root{};
};

using Payload =
    std::variant<RegisterDidPayload, UpdatePointerPayload, SetDelegatesPayload,
                 ProposeRecoveryPayload, ApproveRecoveryPayload,
                 FinalizeRecoveryPayload, CancelRecoveryPayload,
                 RevokeDidPayload, RevokeCredentialPayload, AnchorRootPayload>;

const char* payload_type_name(const Payload& p);
Json payload_to_json(const Payload& p);
Payload payload_from_json(const Json& j);

/// Canonical JSON dump of the payload as bytes; the signed form.
Bytes payload_canonical_bytes(const Payload& p);

}  // namespace ssi
