#include "ssi/payload.hpp"

#include "ssi/errors.hpp"

namespace ssi {

namespace {

std::string hex32(const Digest32& d) { return to_hex(d); }

Digest32 hex32_field(const Json& j, const char* key) {
  return digest_from_hex(j.at(key).get<std::string>());
}

}  // namespace

const char* payload_type_name(const Payload& p) {
  struct Namer {
    const char* operator()(const RegisterDidPayload&) { return "register_did"; }
    const char* operator()(const UpdatePointerPayload&) {
      return "update_pointer";
    }
    const char* operator()(const SetDelegatesPayload&) {
      return "set_delegates";
    }
    const char* operator()(const ProposeRecoveryPayload&) {
      return "propose_recovery";
    }
    const char* operator()(const ApproveRecoveryPayload&) {
      return "approve_recovery";
    }
    const char* operator()(const FinalizeRecoveryPayload&) {
      return "finalize_recovery";
    }
    const char* operator()(const CancelRecoveryPayload&) {
      return "cancel_recovery";
    }
    const char* operator()(const RevokeDidPayload&) { return "revoke_did"; }
    const char* operator()(const RevokeCredentialPayload&) {
      return "revoke_credential";
    }
    const char* operator()(const AnchorRootPayload&) { return "anchor_root"; }
  };
  return std::visit(Namer{}, p);
}

Json payload_to_json(const Payload& p) {
  Json j;
  j["type"] = payload_type_name(p);
  std::visit(
      [&j](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RegisterDidPayload>) {
          j["did"] = v.did;
          j["salt"] = to_hex(v.salt);
          j["controller"] = hex32(v.controller);
          j["ddo_address"] = hex32(v.ddo_address);
        } else if constexpr (std::is_same_v<T, UpdatePointerPayload>) {
          j["did"] = v.did;
          j["new_address"] = hex32(v.new_address);
        } else if constexpr (std::is_same_v<T, SetDelegatesPayload>) {
          j["did"] = v.did;
          j["delegates"] = v.delegates;
          j["threshold"] = v.threshold;
          j["timelock_blocks"] = v.timelock_blocks;
        } else if constexpr (std::is_same_v<T, ProposeRecoveryPayload>) {
          j["did"] = v.did;
          j["new_controller"] = hex32(v.new_controller);
          j["sequence"] = v.sequence;
        } else if constexpr (std::is_same_v<T, ApproveRecoveryPayload>) {
          j["proposal_id"] = v.proposal_id;
          j["delegate_did"] = v.delegate_did;
        } else if constexpr (std::is_same_v<T, FinalizeRecoveryPayload>) {
          j["proposal_id"] = v.proposal_id;
        } else if constexpr (std::is_same_v<T, CancelRecoveryPayload>) {
          j["proposal_id"] = v.proposal_id;
        } else if constexpr (std::is_same_v<T, RevokeDidPayload>) {
          j["did"] = v.did;
        } else if constexpr (std::is_same_v<T, RevokeCredentialPayload>) {
          j["cred_id"] = v.cred_id;
          j["issuer_did"] = v.issuer_did;
        } else if constexpr (std::is_same_v<T, AnchorRootPayload>) {
          j["root"] = hex32(v.root);
        }
      },
      p);
  return j;
}

Payload payload_from_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "register_did") {
    RegisterDidPayload p;
    p.did = j.at("did").get<std::string>();
    p.salt = from_hex(j.at("salt").get<std::string>());
    p.controller = hex32_field(j, "controller");
    p.ddo_address = hex32_field(j, "ddo_address");
    return p;
  }
  if (type == "update_pointer") {
    UpdatePointerPayload p;
    p.did = j.at("did").get<std::string>();
    p.new_address = hex32_field(j, "new_address");
    return p;
  }
  if (type == "set_delegates") {
    SetDelegatesPayload p;
    p.did = j.at("did").get<std::string>();
    p.delegates = j.at("delegates").get<std::vector<std::string>>();
    p.threshold = j.at("threshold").get<uint32_t>();
    p.timelock_blocks = j.at("timelock_blocks").get<Height>();
    return p;
  }
  if (type == "propose_recovery") {
    ProposeRecoveryPayload p;
    p.did = j.at("did").get<std::string>();
    p.new_controller = hex32_field(j, "new_controller");
    p.sequence = j.at("sequence").get<uint64_t>();
    return p;
  }
  if (type == "approve_recovery") {
    ApproveRecoveryPayload p;
    p.proposal_id = j.at("proposal_id").get<std::string>();
    p.delegate_did = j.at("delegate_did").get<std::string>();
    return p;
  }
  if (type == "finalize_recovery") {
    FinalizeRecoveryPayload p;
    p.proposal_id = j.at("proposal_id").get<std::string>();
    return p;
  }
  if (type == "cancel_recovery") {
    CancelRecoveryPayload p;
    p.proposal_id = j.at("proposal_id").get<std::string>();
    return p;
  }
  if (type == "revoke_did") {
    RevokeDidPayload p;
    p.did = j.at("did").get<std::string>();
    return p;
  }
  if (type == "revoke_credential") {
    RevokeCredentialPayload p;
    p.cred_id = j.at("cred_id").get<std::string>();
    p.issuer_did = j.at("issuer_did").get<std::string>();
    return p;
  }
  if (type == "anchor_root") {
    AnchorRootPayload p;
    p.root = hex32_field(j, "root");
    return p;
  }
  fail(Errc::ParseError, "unknown payload type '" + type + "'");
}

Bytes payload_canonical_bytes(const Payload& p) {
  // replace, not strict: ids and signatures are checked over whatever
  // bytes a transaction carries, so the dump has to be total.
  return str_bytes(
      payload_to_json(p).dump(-1, ' ', false, Json::error_handler_t::replace));
}

}  // namespace ssi
