#include "ssi/state.hpp"

#include <set>

#include "ssi/did.hpp"
#include "ssi/errors.hpp"

namespace ssi {

const char* did_state_name(DidState s) {
  switch (s) {
    case DidState::Registered: return "Registered";
    case DidState::Updated: return "Updated";
    case DidState::Recovering: return "Recovering";
    case DidState::Recovered: return "Recovered";
    case DidState::Revoked: return "Revoked";
  }
  return "Unknown";
}

const char* proposal_status_name(ProposalStatus s) {
  switch (s) {
    case ProposalStatus::Open: return "Open";
    case ProposalStatus::Finalized: return "Finalized";
    case ProposalStatus::Cancelled: return "Cancelled";
  }
  return "Unknown";
}

std::string recovery_proposal_id(const std::string& did,
                                 const PublicKey& new_controller,
                                 uint64_t sequence) {
  Encoder enc;
  enc.add(std::string("recovery-proposal")).add(did);
  enc.add(std::span<const uint8_t>(new_controller));
  enc.add(sequence);
  return to_hex(sha256(enc.bytes()));
}

const DidRecord* LedgerState::find_record(const std::string& did) const {
  auto it = records.find(did);
  return it == records.end() ? nullptr : &it->second;
}

const RecoveryProposal* LedgerState::find_proposal(const std::string& id) const {
  auto it = proposals.find(id);
  return it == proposals.end() ? nullptr : &it->second;
}

namespace {

struct Apply {
  LedgerState& st;
  const PublicKey& sender;
  const Digest32& tx_id;
  Height height;

  std::optional<std::string> err(const std::string& reason) { return reason; }

  // Fetch a record and check the sender controls it.
  DidRecord* controlled(const std::string& did, std::string& reason) {
    auto it = st.records.find(did);
    if (it == st.records.end()) {
      reason = "unknown did " + did;
      return nullptr;
    }
    if (it->second.state == DidState::Revoked) {
      reason = "did is revoked";
      return nullptr;
    }
    if (it->second.controller != sender) {
      reason = "sender is not the controller";
      return nullptr;
    }
    return &it->second;
  }

  std::optional<std::string> operator()(const RegisterDidPayload& p) {
    if (p.controller != sender) return err("controller must be the sender");
    if (p.salt.size() != 16) return err("salt must be 16 bytes");
    if (p.did != make_did(p.controller, p.salt)) {
      return err("did does not match controller and salt");
    }
    if (st.records.count(p.did)) return err("did already registered");
    if (st.controller_of.count(to_hex(p.controller))) {
      return err("key already controls another did");
    }
    DidRecord r;
    r.did = p.did;
    r.controller = p.controller;
    r.ddo_address = p.ddo_address;
    st.records[p.did] = r;
    st.controller_of[to_hex(p.controller)] = p.did;
    return std::nullopt;
  }

  std::optional<std::string> operator()(const UpdatePointerPayload& p) {
    std::string reason;
    DidRecord* r = controlled(p.did, reason);
    if (!r) return err(reason);
    r->ddo_address = p.new_address;
    if (r->state != DidState::Recovering) r->state = DidState::Updated;
    return std::nullopt;
  }

  std::optional<std::string> operator()(const SetDelegatesPayload& p) {
    std::string reason;
    DidRecord* r = controlled(p.did, reason);
    if (!r) return err(reason);
    if (p.delegates.empty()) return err("delegate list is empty");
    if (p.threshold < 1 || p.threshold > p.delegates.size()) {
      return err("threshold out of range");
    }
    std::set<std::string> uniq(p.delegates.begin(), p.delegates.end());
    if (uniq.size() != p.delegates.size()) return err("duplicate delegate");
    if (uniq.count(p.did)) return err("a did cannot delegate to itself");
    for (const std::string& d : p.delegates) {
      const DidRecord* rec = st.find_record(d);
      if (!rec || rec->state == DidState::Revoked) {
        return err("delegate " + d + " not registered");
      }
    }
    r->delegates = p.delegates;
    r->threshold = p.threshold;
    r->timelock_blocks = p.timelock_blocks;
    if (r->state != DidState::Recovering) r->state = DidState::Updated;
    return std::nullopt;
  }

  std::optional<std::string> operator()(const ProposeRecoveryPayload& p) {
    auto it = st.records.find(p.did);
    if (it == st.records.end()) return err("unknown did " + p.did);
    DidRecord& r = it->second;
    if (r.state == DidState::Revoked) return err("did is revoked");
    if (r.delegates.empty()) return err("did has no delegates");
    if (p.new_controller != sender) {
      return err("proposal must be signed with the proposed key");
    }
    if (st.controller_of.count(to_hex(p.new_controller))) {
      return err("proposed key already controls a did");
    }
    if (r.state == DidState::Recovering) return err("recovery already open");
    uint64_t expect_seq = st.proposal_seq[p.did];
    if (p.sequence != expect_seq) return err("stale proposal sequence");
    std::string id = recovery_proposal_id(p.did, p.new_controller, p.sequence);

    RecoveryProposal prop;
    prop.proposal_id = id;
    prop.did = p.did;
    prop.new_controller = p.new_controller;
    prop.opened_at = height;
    st.proposals[id] = prop;
    st.proposal_seq[p.did] = expect_seq + 1;
    r.pre_recovery_state = r.state;
    r.state = DidState::Recovering;
    return std::nullopt;
  }

  std::optional<std::string> operator()(const ApproveRecoveryPayload& p) {
    auto it = st.proposals.find(p.proposal_id);
    if (it == st.proposals.end()) return err("unknown proposal");
    RecoveryProposal& prop = it->second;
    if (prop.status != ProposalStatus::Open) return err("proposal is closed");
    const DidRecord* r = st.find_record(prop.did);
    if (!r) return err("unknown did " + prop.did);
    bool listed = false;
    for (const std::string& d : r->delegates) listed |= (d == p.delegate_did);
    if (!listed) return err(p.delegate_did + " is not a delegate");
    const DidRecord* del = st.find_record(p.delegate_did);
    if (!del || del->state == DidState::Revoked) {
      return err("delegate did is not usable");
    }
    if (del->controller != sender) {
      return err("sender does not control the delegate did");
    }
    for (const std::string& a : prop.approvals) {
      if (a == p.delegate_did) return err("delegate already approved");
    }
    prop.approvals.push_back(p.delegate_did);
    return std::nullopt;
  }

  std::optional<std::string> operator()(const FinalizeRecoveryPayload& p) {
    auto it = st.proposals.find(p.proposal_id);
    if (it == st.proposals.end()) return err("unknown proposal");
    RecoveryProposal& prop = it->second;
    if (prop.status != ProposalStatus::Open) return err("proposal is closed");
    auto rit = st.records.find(prop.did);
    if (rit == st.records.end()) return err("unknown did " + prop.did);
    DidRecord& r = rit->second;
    if (prop.approvals.size() < r.threshold) return err("quorum not met");
    if (height < prop.opened_at + r.timelock_blocks) {
      return err("timelock still active");
    }
    st.controller_of.erase(to_hex(r.controller));
    r.controller = prop.new_controller;
    st.controller_of[to_hex(prop.new_controller)] = r.did;
    r.state = DidState::Recovered;
    prop.status = ProposalStatus::Finalized;
    return std::nullopt;
  }

  std::optional<std::string> operator()(const CancelRecoveryPayload& p) {
    auto it = st.proposals.find(p.proposal_id);
    if (it == st.proposals.end()) return err("unknown proposal");
    RecoveryProposal& prop = it->second;
    if (prop.status != ProposalStatus::Open) return err("proposal is closed");
    auto rit = st.records.find(prop.did);
    if (rit == st.records.end()) return err("unknown did " + prop.did);
    DidRecord& r = rit->second;
    // Only the current controller can cancel; this is what lets the
    // rightful holder stop a recovery attempt by someone else.
    if (r.controller != sender) return err("sender is not the controller");
    prop.status = ProposalStatus::Cancelled;
    r.state = r.pre_recovery_state;
    return std::nullopt;
  }

  std::optional<std::string> operator()(const RevokeDidPayload& p) {
    std::string reason;
    DidRecord* r = controlled(p.did, reason);
    if (!r) return err(reason);
    r->state = DidState::Revoked;
    return std::nullopt;
  }

  std::optional<std::string> operator()(const RevokeCredentialPayload& p) {
    const DidRecord* issuer = st.find_record(p.issuer_did);
    if (!issuer) return err("unknown issuer did");
    if (issuer->controller != sender) {
      return err("sender does not control the issuer did");
    }
    // First revocation wins; replays keep the original height.
    if (!st.revocations.count(p.cred_id)) {
      st.revocations[p.cred_id] = {p.cred_id, p.issuer_did, height};
    }
    return std::nullopt;
  }

  std::optional<std::string> operator()(const AnchorRootPayload& p) {
    std::string key = to_hex(p.root);
    if (!st.anchors.count(key)) {
      st.anchors[key] = {p.root, tx_id, height};
    }
    return std::nullopt;
  }
};

}  // namespace

std::optional<std::string> LedgerState::apply(const PublicKey& sender,
                                              const Payload& p,
                                              const Digest32& tx_id,
                                              Height height, size_t index) {
  tx_index[to_hex(tx_id)] = {height, index};
  auto result = std::visit(Apply{*this, sender, tx_id, height}, p);
  if (result) failed[to_hex(tx_id)] = *result;
  return result;
}

}  // namespace ssi
