#pragma once

#include "ssi/did.hpp"
#include "ssi/ledger.hpp"
#include "ssi/stores.hpp"
#include "ssi/wallet.hpp"

namespace ssi {

/// Document fields the caller chooses at registration time; identifier
/// and key material are filled in by the registry.
struct DdoDraft {
  std::string context = "https://www.w3.org/ns/did/v1";
  std::vector<ServiceEndpoint> service;
  Json extra = Json::object();
};

struct SocialCheck {
  bool post_found = false;        // the post exists and names the DID
  bool signature_valid = false;   // binding signed by the current controller
  bool ok() const { return post_found && signature_valid; }
};

/// Operations against DID records. Every mutation becomes a signed
/// ledger transaction; errors are raised eagerly against the
/// speculative state (pool included) so a batch of related operations
/// can land in a single block. Reads go through included state only.
class DidRegistry {
 public:
  DidRegistry(Ledger& ledger, ContentStore& store)
      : ledger_(ledger), store_(store) {}

  std::string register_did(Wallet& wallet, const std::string& key,
                           const DdoDraft& draft, Rng& rng);

  DidDocument resolve(const std::string& did) const;

  /// Both directions of a mutual introduction in one call.
  std::pair<DidDocument, DidDocument> dual_resolve(const std::string& a,
                                                   const std::string& b) const;

  Digest32 update_document(Wallet& wallet, const std::string& key,
                           const std::string& did, DidDocument doc);

  Digest32 set_delegates(Wallet& wallet, const std::string& key,
                         const std::string& did,
                         const std::vector<std::string>& delegates,
                         uint32_t threshold, Height timelock_blocks);

  std::string propose_recovery(Wallet& wallet, const std::string& new_key,
                               const std::string& did);
  size_t approve_recovery(Wallet& wallet, const std::string& key,
                          const std::string& delegate_did,
                          const std::string& proposal_id);
  Digest32 finalize_recovery(Wallet& wallet, const std::string& key,
                             const std::string& proposal_id);
  Digest32 cancel_recovery(Wallet& wallet, const std::string& key,
                           const std::string& proposal_id);

  Digest32 revoke_did(Wallet& wallet, const std::string& key,
                      const std::string& did);

  SocialBinding bind_social(Wallet& wallet, const std::string& key,
                            const std::string& did,
                            const std::string& profile_url,
                            SocialStore& social);
  SocialCheck verify_social(const std::string& did,
                            const SocialStore& social) const;

  const DidRecord& record(const std::string& did) const;
  const DidRecord* find_record(const std::string& did) const;
  const RecoveryProposal& proposal(const std::string& proposal_id) const;

  Ledger& ledger() { return ledger_; }
  const Ledger& ledger() const { return ledger_; }
  ContentStore& store() { return store_; }

 private:
  Digest32 submit_signed(Wallet& wallet, const std::string& key,
                         Payload payload, SignPurpose purpose);
  const DidRecord& controlled_record(const LedgerState& st, Wallet& wallet,
                                     const std::string& key,
                                     const std::string& did) const;

  Ledger& ledger_;
  ContentStore& store_;
};

}  // namespace ssi
