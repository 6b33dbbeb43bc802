#include "ssi/registry.hpp"

#include <algorithm>
#include <set>

#include "ssi/errors.hpp"

namespace ssi {

namespace {

void check_draft(const std::string& context,
                 const std::vector<ServiceEndpoint>& service) {
  if (context.empty()) fail(Errc::BadDdo, "document context is empty");
  for (const ServiceEndpoint& s : service) {
    if (s.name.empty() || s.endpoint.empty()) {
      fail(Errc::BadDdo, "service entries need a name and an endpoint");
    }
  }
}

}  // namespace

Digest32 DidRegistry::submit_signed(Wallet& wallet, const std::string& key,
                                    Payload payload, SignPurpose purpose) {
  const PublicKey& sender = wallet.pub(key);
  Transaction tx = make_transaction(
      sender, std::move(payload), ledger_.next_nonce(sender),
      [&](std::span<const uint8_t> msg) { return wallet.sign(key, msg, purpose); });
  return ledger_.submit(tx);
}

const DidRecord& DidRegistry::controlled_record(const LedgerState& st,
                                                Wallet& wallet,
                                                const std::string& key,
                                                const std::string& did) const {
  const DidRecord* rec = st.find_record(did);
  if (!rec) fail(Errc::UnknownDid, "no record for " + did);
  if (rec->state == DidState::Revoked) fail(Errc::RevokedDid, did + " is revoked");
  if (rec->controller != wallet.pub(key)) {
    fail(Errc::NotController, "key '" + key + "' does not control " + did);
  }
  return *rec;
}

std::string DidRegistry::register_did(Wallet& wallet, const std::string& key,
                                      const DdoDraft& draft, Rng& rng) {
  check_draft(draft.context, draft.service);
  const PublicKey& controller = wallet.pub(key);

  LedgerState spec = ledger_.speculative_state();
  if (spec.controller_of.count(to_hex(controller))) {
    fail(Errc::DuplicateController,
         "key already controls " + spec.controller_of.at(to_hex(controller)));
  }

  Bytes salt = rng.bytes(16);
  std::string did = make_did(controller, salt);

  DidDocument doc;
  doc.context = draft.context;
  doc.id = did;
  doc.public_key = controller;
  doc.service = draft.service;
  doc.extra = draft.extra;
  Digest32 addr = store_.put(doc.canonical_bytes());

  RegisterDidPayload p;
  p.did = did;
  p.salt = std::move(salt);
  p.controller = controller;
  p.ddo_address = addr;
  submit_signed(wallet, key, p, SignPurpose::RegistryUpdate);
  return did;
}

DidDocument DidRegistry::resolve(const std::string& did) const {
  const DidRecord* rec = ledger_.state().find_record(did);
  if (!rec) fail(Errc::UnknownDid, "no record for " + did);
  if (rec->state == DidState::Revoked) {
    fail(Errc::RevokedDid, did + " is revoked");
  }
  Bytes content = store_.get(rec->ddo_address);
  return DidDocument::from_json(Json::parse(content.begin(), content.end()));
}

std::pair<DidDocument, DidDocument> DidRegistry::dual_resolve(
    const std::string& a, const std::string& b) const {
  return {resolve(a), resolve(b)};
}

Digest32 DidRegistry::update_document(Wallet& wallet, const std::string& key,
                                      const std::string& did,
                                      DidDocument doc) {
  LedgerState spec = ledger_.speculative_state();
  const DidRecord& rec = controlled_record(spec, wallet, key, did);
  check_draft(doc.context, doc.service);
  if (doc.id != did) fail(Errc::BadDdo, "document id does not match the did");
  doc.public_key = rec.controller;

  UpdatePointerPayload p;
  p.did = did;
  p.new_address = store_.put(doc.canonical_bytes());
  return submit_signed(wallet, key, p, SignPurpose::RegistryUpdate);
}

Digest32 DidRegistry::set_delegates(Wallet& wallet, const std::string& key,
                                    const std::string& did,
                                    const std::vector<std::string>& delegates,
                                    uint32_t threshold,
                                    Height timelock_blocks) {
  LedgerState spec = ledger_.speculative_state();
  controlled_record(spec, wallet, key, did);
  if (delegates.empty()) fail(Errc::NoDelegates, "delegate list is empty");
  if (threshold < 1 || threshold > delegates.size()) {
    fail(Errc::BadQuorum, "threshold must be in [1, " +
                              std::to_string(delegates.size()) + "]");
  }
  std::set<std::string> uniq(delegates.begin(), delegates.end());
  if (uniq.size() != delegates.size()) {
    fail(Errc::UnknownDelegate, "duplicate delegate did");
  }
  if (uniq.count(did)) {
    fail(Errc::UnknownDelegate, "a did cannot be its own delegate");
  }
  for (const std::string& d : delegates) {
    const DidRecord* rec = spec.find_record(d);
    if (!rec || rec->state == DidState::Revoked) {
      fail(Errc::UnknownDelegate, "delegate " + d + " is not registered");
    }
  }

  SetDelegatesPayload p;
  p.did = did;
  p.delegates = delegates;
  p.threshold = threshold;
  p.timelock_blocks = timelock_blocks;
  return submit_signed(wallet, key, p, SignPurpose::RegistryUpdate);
}

std::string DidRegistry::propose_recovery(Wallet& wallet,
                                          const std::string& new_key,
                                          const std::string& did) {
  LedgerState spec = ledger_.speculative_state();
  const DidRecord* rec = spec.find_record(did);
  if (!rec) fail(Errc::UnknownDid, "no record for " + did);
  if (rec->state == DidState::Revoked) fail(Errc::RevokedDid, did + " is revoked");
  if (rec->delegates.empty()) {
    fail(Errc::NoDelegates, did + " has no delegates to recover through");
  }
  if (rec->state == DidState::Recovering) {
    fail(Errc::ProposalAlreadyOpen, "a recovery for " + did + " is already open");
  }
  const PublicKey& new_controller = wallet.pub(new_key);
  if (spec.controller_of.count(to_hex(new_controller))) {
    fail(Errc::DuplicateController, "proposed key already controls a did");
  }

  ProposeRecoveryPayload p;
  p.did = did;
  p.new_controller = new_controller;
  auto it = spec.proposal_seq.find(did);
  p.sequence = it == spec.proposal_seq.end() ? 0 : it->second;
  // Anyone holding the new key may propose; delegates gate the outcome.
  submit_signed(wallet, new_key, p, SignPurpose::Recovery);
  return recovery_proposal_id(did, new_controller, p.sequence);
}

size_t DidRegistry::approve_recovery(Wallet& wallet, const std::string& key,
                                     const std::string& delegate_did,
                                     const std::string& proposal_id) {
  LedgerState spec = ledger_.speculative_state();
  const RecoveryProposal* prop = spec.find_proposal(proposal_id);
  if (!prop) fail(Errc::UnknownProposal, "no proposal " + proposal_id);
  if (prop->status != ProposalStatus::Open) {
    fail(Errc::ProposalClosed,
         "proposal is " + std::string(proposal_status_name(prop->status)));
  }
  const DidRecord* rec = spec.find_record(prop->did);
  if (!rec) fail(Errc::UnknownDid, "no record for " + prop->did);
  if (!std::count(rec->delegates.begin(), rec->delegates.end(), delegate_did)) {
    fail(Errc::NotADelegate, delegate_did + " is not a delegate of " + prop->did);
  }
  const DidRecord* del = spec.find_record(delegate_did);
  if (!del || del->controller != wallet.pub(key)) {
    fail(Errc::NotADelegate, "key '" + key + "' does not control " + delegate_did);
  }
  if (std::count(prop->approvals.begin(), prop->approvals.end(), delegate_did)) {
    fail(Errc::DuplicateApproval, delegate_did + " already approved");
  }

  ApproveRecoveryPayload p;
  p.proposal_id = proposal_id;
  p.delegate_did = delegate_did;
  submit_signed(wallet, key, p, SignPurpose::Recovery);
  return prop->approvals.size() + 1;
}

Digest32 DidRegistry::finalize_recovery(Wallet& wallet, const std::string& key,
                                        const std::string& proposal_id) {
  LedgerState spec = ledger_.speculative_state();
  const RecoveryProposal* prop = spec.find_proposal(proposal_id);
  if (!prop) fail(Errc::UnknownProposal, "no proposal " + proposal_id);
  if (prop->status != ProposalStatus::Open) {
    fail(Errc::ProposalClosed,
         "proposal is " + std::string(proposal_status_name(prop->status)));
  }
  const DidRecord* rec = spec.find_record(prop->did);
  if (!rec) fail(Errc::UnknownDid, "no record for " + prop->did);
  if (prop->approvals.size() < rec->threshold) {
    fail(Errc::QuorumNotMet, std::to_string(prop->approvals.size()) + " of " +
                                 std::to_string(rec->threshold) +
                                 " approvals collected");
  }
  // The timelock runs in block heights from inclusion of the proposal.
  // Checked against the current height; the inclusion height of the
  // finalize transaction is strictly later, so it cannot regress.
  Height deadline = prop->opened_at + rec->timelock_blocks;
  if (ledger_.height() < deadline) {
    fail(Errc::TimelockActive,
         "finalize allowed at height " + std::to_string(deadline) +
             ", current height is " + std::to_string(ledger_.height()));
  }

  FinalizeRecoveryPayload p;
  p.proposal_id = proposal_id;
  return submit_signed(wallet, key, p, SignPurpose::Recovery);
}

Digest32 DidRegistry::cancel_recovery(Wallet& wallet, const std::string& key,
                                      const std::string& proposal_id) {
  LedgerState spec = ledger_.speculative_state();
  const RecoveryProposal* prop = spec.find_proposal(proposal_id);
  if (!prop) fail(Errc::UnknownProposal, "no proposal " + proposal_id);
  if (prop->status != ProposalStatus::Open) {
    fail(Errc::ProposalClosed,
         "proposal is " + std::string(proposal_status_name(prop->status)));
  }
  const DidRecord* rec = spec.find_record(prop->did);
  if (!rec) fail(Errc::UnknownDid, "no record for " + prop->did);
  if (rec->controller != wallet.pub(key)) {
    fail(Errc::NotController, "only the current controller can cancel");
  }

  CancelRecoveryPayload p;
  p.proposal_id = proposal_id;
  return submit_signed(wallet, key, p, SignPurpose::Recovery);
}

Digest32 DidRegistry::revoke_did(Wallet& wallet, const std::string& key,
                                 const std::string& did) {
  LedgerState spec = ledger_.speculative_state();
  controlled_record(spec, wallet, key, did);
  RevokeDidPayload p;
  p.did = did;
  return submit_signed(wallet, key, p, SignPurpose::RegistryUpdate);
}

SocialBinding DidRegistry::bind_social(Wallet& wallet, const std::string& key,
                                       const std::string& did,
                                       const std::string& profile_url,
                                       SocialStore& social) {
  LedgerState spec = ledger_.speculative_state();
  controlled_record(spec, wallet, key, did);

  std::string post_url = social.post(profile_url, "I control " + did);

  SocialBinding binding;
  binding.profile_url = profile_url;
  binding.post_url = post_url;
  binding.attribute_signature =
      wallet.sign(key, social_binding_bytes(did, profile_url, post_url),
                  SignPurpose::RegistryUpdate);

  // The binding lives in the document, so resolving the DID leads to
  // the profile and the profile's post leads back to the DID.
  const DidRecord* rec = spec.find_record(did);
  Bytes content = store_.get(rec->ddo_address);
  DidDocument doc =
      DidDocument::from_json(Json::parse(content.begin(), content.end()));
  doc.social = binding;
  update_document(wallet, key, did, std::move(doc));
  return binding;
}

SocialCheck DidRegistry::verify_social(const std::string& did,
                                       const SocialStore& social) const {
  SocialCheck check;
  const DidRecord* rec = ledger_.state().find_record(did);
  if (!rec || rec->state == DidState::Revoked) return check;
  Bytes content = store_.get(rec->ddo_address);
  DidDocument doc =
      DidDocument::from_json(Json::parse(content.begin(), content.end()));
  if (!doc.social) return check;

  std::optional<std::string> post = social.get_post(doc.social->post_url);
  check.post_found = post && post->find(did) != std::string::npos;
  check.signature_valid = ed25519_verify(
      rec->controller,
      social_binding_bytes(did, doc.social->profile_url, doc.social->post_url),
      doc.social->attribute_signature);
  return check;
}

const DidRecord& DidRegistry::record(const std::string& did) const {
  const DidRecord* rec = ledger_.state().find_record(did);
  if (!rec) fail(Errc::UnknownDid, "no record for " + did);
  return *rec;
}

const DidRecord* DidRegistry::find_record(const std::string& did) const {
  return ledger_.state().find_record(did);
}

const RecoveryProposal& DidRegistry::proposal(
    const std::string& proposal_id) const {
  const RecoveryProposal* prop = ledger_.state().find_proposal(proposal_id);
  if (!prop) fail(Errc::UnknownProposal, "no proposal " + proposal_id);
  return *prop;
}

}  // namespace ssi
