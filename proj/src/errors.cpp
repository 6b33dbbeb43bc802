#include "ssi/errors.hpp"

namespace ssi {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::BadSignature: return "BadSignature";
    case Errc::StaleNonce: return "StaleNonce";
    case Errc::BadSeedLength: return "BadSeedLength";
    case Errc::EmptyLabel: return "EmptyLabel";
    case Errc::KeyMissing: return "KeyMissing";
    case Errc::KeyNotActive: return "KeyNotActive";
    case Errc::MasterKeyPolicy: return "MasterKeyPolicy";
    case Errc::NotAColdWallet: return "NotAColdWallet";
    case Errc::ColdWalletOffline: return "ColdWalletOffline";
    case Errc::BadThreshold: return "BadThreshold";
    case Errc::NotEnoughShards: return "NotEnoughShards";
    case Errc::MixedSplits: return "MixedSplits";
    case Errc::DigestMismatch: return "DigestMismatch";
    case Errc::NotFound: return "NotFound";
    case Errc::IntegrityViolation: return "IntegrityViolation";
    case Errc::DuplicateController: return "DuplicateController";
    case Errc::BadDdo: return "BadDdo";
    case Errc::UnknownDid: return "UnknownDid";
    case Errc::RevokedDid: return "RevokedDid";
    case Errc::NotController: return "NotController";
    case Errc::BadQuorum: return "BadQuorum";
    case Errc::UnknownDelegate: return "UnknownDelegate";
    case Errc::NoDelegates: return "NoDelegates";
    case Errc::ProposalAlreadyOpen: return "ProposalAlreadyOpen";
    case Errc::UnknownProposal: return "UnknownProposal";
    case Errc::NotADelegate: return "NotADelegate";
    case Errc::DuplicateApproval: return "DuplicateApproval";
    case Errc::ProposalClosed: return "ProposalClosed";
    case Errc::QuorumNotMet: return "QuorumNotMet";
    case Errc::TimelockActive: return "TimelockActive";
    case Errc::SocialPostMissing: return "SocialPostMissing";
    case Errc::SignatureInvalid: return "SignatureInvalid";
    case Errc::UnknownIssuer: return "UnknownIssuer";
    case Errc::EmptyClaims: return "EmptyClaims";
    case Errc::DuplicateClaim: return "DuplicateClaim";
    case Errc::WrongScheme: return "WrongScheme";
    case Errc::PredicateFalse: return "PredicateFalse";
    case Errc::UnsupportedPredicate: return "UnsupportedPredicate";
    case Errc::UnknownAttribute: return "UnknownAttribute";
    case Errc::NotHolder: return "NotHolder";
    case Errc::NotIssuer: return "NotIssuer";
    case Errc::UnknownCredential: return "UnknownCredential";
    case Errc::ExpiryInPast: return "ExpiryInPast";
    case Errc::UnknownToken: return "UnknownToken";
    case Errc::Expired: return "Expired";
    case Errc::Consumed: return "Consumed";
    case Errc::Revoked: return "Revoked";
    case Errc::EmptyBatch: return "EmptyBatch";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ParseError: return "ParseError";
    case Errc::UnresolvedReference: return "UnresolvedReference";
    case Errc::ExpectationMismatch: return "ExpectationMismatch";
    case Errc::RoleViolation: return "RoleViolation";
  }
  return "Unknown";
}

void fail(Errc code, const std::string& message) {
  throw SsiError(code, message);
}

}  // namespace ssi
