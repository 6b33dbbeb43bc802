#pragma once

#include <stdexcept>
#include <string>

namespace ssi {

enum class Errc {
  // ledger
  BadSignature,
  StaleNonce,
  // keys and wallets
  BadSeedLength,
  EmptyLabel,
  KeyMissing,
  KeyNotActive,
  MasterKeyPolicy,
  NotAColdWallet,
  ColdWalletOffline,
  // shard splitting
  BadThreshold,
  NotEnoughShards,
  MixedSplits,
  DigestMismatch,
  // content and social stores
  NotFound,
  IntegrityViolation,
  // registry
  DuplicateController,
  BadDdo,
  UnknownDid,
  RevokedDid,
  NotController,
  BadQuorum,
  UnknownDelegate,
  NoDelegates,
  ProposalAlreadyOpen,
  UnknownProposal,
  NotADelegate,
  DuplicateApproval,
  ProposalClosed,
  QuorumNotMet,
  TimelockActive,
  SocialPostMissing,
  SignatureInvalid,
  // credentials
  UnknownIssuer,
  EmptyClaims,
  DuplicateClaim,
  WrongScheme,
  PredicateFalse,
  UnsupportedPredicate,
  UnknownAttribute,
  NotHolder,
  NotIssuer,
  UnknownCredential,
  // share links
  ExpiryInPast,
  UnknownToken,
  Expired,
  Consumed,
  Revoked,
  // anchoring
  EmptyBatch,
  IndexOutOfRange,
  // scenario harness
  ParseError,
  UnresolvedReference,
  ExpectationMismatch,
  RoleViolation,
};

const char* errc_name(Errc code);

class SsiError : public std::runtime_error {
 public:
  SsiError(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }
  const char* name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

}  // namespace ssi
