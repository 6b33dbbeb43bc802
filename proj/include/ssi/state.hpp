#pragma once

#include <map>
#include <optional>

#include "ssi/payload.hpp"

namespace ssi {

enum class DidState { Registered, Updated, Recovering, Recovered, Revoked };
const char* did_state_name(DidState s);

struct DidRecord {
  std::string did;
  PublicKey controller{};
  Digest32 ddo_address{};
  std::vector<std::string> delegates;
  uint32_t threshold = 0;
  Height timelock_blocks = 0;
  DidState state = DidState::Registered;
  // Restored if an open recovery proposal is cancelled.
  DidState pre_recovery_state = DidState::Registered;
};

enum class ProposalStatus { Open, Finalized, Cancelled };
const char* proposal_status_name(ProposalStatus s);

struct RecoveryProposal {
  std::string proposal_id;  // hex digest, fixed by (did, new key, sequence)
  std::string did;
  PublicKey new_controller{};
  Height opened_at = 0;  // height of the block that included the proposal
  std::vector<std::string> approvals;  // delegate DIDs, approval order
  ProposalStatus status = ProposalStatus::Open;
};

struct RevocationEntry {
  std::string cred_id;
  std::string issuer_did;
  Height revoked_at = 0;
};

struct AnchorEntry {
  Digest32 root{};
  Digest32 tx_id{};
  Height anchored_at = 0;
};

struct TxLocation {
  Height height = 0;
  size_t index = 0;
};

std::string recovery_proposal_id(const std::string& did,
                                 const PublicKey& new_controller,
                                 uint64_t sequence);

/// State is a pure fold of apply() over every transaction in every
/// block, in order. Two ledgers with the same blocks always hold the
/// same state; loads recompute it from scratch.
struct LedgerState {
  std::map<std::string, DidRecord> records;           // did -> record
  std::map<std::string, std::string> controller_of;   // pub hex -> did
  std::map<std::string, RecoveryProposal> proposals;  // proposal id -> ...
  std::map<std::string, uint64_t> proposal_seq;       // did -> proposals opened
  std::map<std::string, RevocationEntry> revocations; // cred id hex -> ...
  std::map<std::string, AnchorEntry> anchors;         // root hex -> ...
  std::map<std::string, TxLocation> tx_index;         // tx id hex -> location
  std::map<std::string, std::string> failed;          // tx id hex -> reason

  /// Apply one included transaction. Returns the rejection reason if
  /// the payload is invalid against current state; the transaction
  /// stays in its block either way and the failure is recorded.
  std::optional<std::string> apply(const PublicKey& sender, const Payload& p,
                                   const Digest32& tx_id, Height height,
                                   size_t index);

  const DidRecord* find_record(const std::string& did) const;
  const RecoveryProposal* find_proposal(const std::string& id) const;
};

}  // namespace ssi
