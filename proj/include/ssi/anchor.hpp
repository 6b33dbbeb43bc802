#pragma once

#include "ssi/ledger.hpp"
#include "ssi/merkle.hpp"

namespace ssi {

/// Everything needed to later prove one piece of content was anchored:
/// the content digest, its path to the batch root, and the ledger
/// transaction that carries the root.
struct AnchorReceipt {
  Digest32 content_digest{};
  Digest32 root{};
  Digest32 tx_id{};
  Height anchored_at = 0;
  InclusionProof proof;

  Json to_json() const;
  static AnchorReceipt from_json(const Json& j);
};

/// Collects content digests and anchors them in batches: one Merkle
/// root, one ledger transaction, however many digests are pending
/// (chunked at batch_limit). Single-writer by design, like the rest of
/// the simulator.
class AnchorService {
 public:
  static constexpr size_t kDefaultBatchLimit = 1024;

  explicit AnchorService(KeyPair signing_key,
                         size_t batch_limit = kDefaultBatchLimit)
      : key_(std::move(signing_key)), batch_limit_(batch_limit) {}

  void add(const Digest32& content_digest);
  size_t pending_count() const { return pending_.size(); }
  const PublicKey& pub() const { return key_.pub; }

  /// Anchor all pending digests. Produces blocks until every root
  /// transaction is included, then returns one receipt per digest in
  /// the order they were added.
  std::vector<AnchorReceipt> flush(Ledger& ledger);

  Json to_json() const;
  static AnchorService from_json(const Json& j);

 private:
  KeyPair key_;
  size_t batch_limit_;
  std::vector<Digest32> pending_;
};

struct AnchorCheck {
  bool ok = true;
  std::string reason;
};

/// Offline-style verification: content digest, Merkle path, and the
/// anchoring transaction on the ledger must all line up.
AnchorCheck verify_anchored(std::span<const uint8_t> content,
                            const AnchorReceipt& receipt,
                            const Ledger& ledger);

}  // namespace ssi
