#include "ssi/anchor.hpp"

#include <algorithm>

#include "ssi/errors.hpp"

namespace ssi {

Json AnchorReceipt::to_json() const {
  Json siblings = Json::array();
  for (const ProofStep& s : proof.siblings) {
    siblings.push_back(
        {{"digest", to_hex(s.digest)},
         {"side", s.side == SiblingSide::Left ? "left" : "right"}});
  }
  Json j;
  j["anchored_at"] = anchored_at;
  j["content_digest"] = to_hex(content_digest);
  j["leaf_index"] = proof.leaf_index;
  j["root"] = to_hex(root);
  j["siblings"] = siblings;
  j["tx_id"] = to_hex(tx_id);
  return j;
}

AnchorReceipt AnchorReceipt::from_json(const Json& j) {
  AnchorReceipt r;
  r.anchored_at = j.at("anchored_at").get<Height>();
  r.content_digest = digest_from_hex(j.at("content_digest").get<std::string>());
  r.root = digest_from_hex(j.at("root").get<std::string>());
  r.tx_id = digest_from_hex(j.at("tx_id").get<std::string>());
  r.proof.leaf_index = j.at("leaf_index").get<size_t>();
  for (const Json& s : j.at("siblings")) {
    std::string side = s.at("side").get<std::string>();
    if (side != "left" && side != "right") {
      fail(Errc::ParseError, "sibling side must be left or right");
    }
    r.proof.siblings.push_back(
        {digest_from_hex(s.at("digest").get<std::string>()),
         side == "left" ? SiblingSide::Left : SiblingSide::Right});
  }
  return r;
}

void AnchorService::add(const Digest32& content_digest) {
  pending_.push_back(content_digest);
}

std::vector<AnchorReceipt> AnchorService::flush(Ledger& ledger) {
  if (pending_.empty()) fail(Errc::EmptyBatch, "nothing pending to anchor");

  struct Chunk {
    MerkleTree tree;
    Digest32 tx_id;
    size_t first;  // index into pending_ of this chunk's first digest
    size_t count;
  };
  std::vector<Chunk> chunks;
  for (size_t first = 0; first < pending_.size(); first += batch_limit_) {
    size_t count = std::min(batch_limit_, pending_.size() - first);
    std::vector<Digest32> leaves(pending_.begin() + first,
                                 pending_.begin() + first + count);
    MerkleTree tree = MerkleTree::build(leaves);
    AnchorRootPayload p;
    p.root = tree.root();
    Transaction tx = make_transaction(key_, p, ledger.next_nonce(key_.pub));
    Digest32 tx_id = ledger.submit(tx);
    chunks.push_back({std::move(tree), tx_id, first, count});
  }
  // Drain until every root transaction is on chain; other pool traffic
  // may share the blocks.
  auto included = [&](const Digest32& id) {
    return ledger.state().tx_index.count(to_hex(id)) > 0;
  };
  while (!included(chunks.back().tx_id)) ledger.produce_block();

  std::vector<AnchorReceipt> receipts;
  receipts.reserve(pending_.size());
  for (const Chunk& chunk : chunks) {
    Height anchored_at = ledger.state().tx_index.at(to_hex(chunk.tx_id)).height;
    for (size_t i = 0; i < chunk.count; ++i) {
      AnchorReceipt r;
      r.content_digest = pending_[chunk.first + i];
      r.root = chunk.tree.root();
      r.tx_id = chunk.tx_id;
      r.anchored_at = anchored_at;
      r.proof = chunk.tree.prove(i);
      receipts.push_back(std::move(r));
    }
  }
  pending_.clear();
  return receipts;
}

Json AnchorService::to_json() const {
  Json pending = Json::array();
  for (const Digest32& d : pending_) pending.push_back(to_hex(d));
  Json j;
  j["batch_limit"] = batch_limit_;
  j["pending"] = pending;
  j["seed"] = to_hex(key_.seed);
  return j;
}

AnchorService AnchorService::from_json(const Json& j) {
  KeyPair key = keypair_from_seed(
      from_hex(j.at("seed").get<std::string>()));
  AnchorService svc(key, j.at("batch_limit").get<size_t>());
  for (const Json& d : j.at("pending")) {
    svc.pending_.push_back(digest_from_hex(d.get<std::string>()));
  }
  return svc;
}

AnchorCheck verify_anchored(std::span<const uint8_t> content,
                            const AnchorReceipt& receipt,
                            const Ledger& ledger) {
  if (sha256(content) != receipt.content_digest) {
    return {false, "content does not match the receipt digest"};
  }
  if (!MerkleTree::verify(receipt.content_digest, receipt.proof,
                          receipt.root)) {
    return {false, "inclusion proof does not reach the root"};
  }
  const Transaction* tx = ledger.find_tx(receipt.tx_id);
  if (!tx) return {false, "anchoring transaction is not on the ledger"};
  const auto* payload = std::get_if<AnchorRootPayload>(&tx->payload);
  if (!payload) return {false, "transaction does not carry an anchor root"};
  if (payload->root != receipt.root) {
    return {false, "transaction anchors a different root"};
  }
  return {};
}

}  // namespace ssi
