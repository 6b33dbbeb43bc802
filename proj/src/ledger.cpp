#include "ssi/ledger.hpp"

#include <algorithm>

#include "ssi/errors.hpp"

namespace ssi {

Bytes Transaction::signable_bytes() const {
  Encoder enc;
  enc.add(std::span<const uint8_t>(sender));
  enc.add(std::span<const uint8_t>(payload_canonical_bytes(payload)));
  enc.add(nonce);
  return enc.take();
}

Digest32 Transaction::compute_id() const {
  Encoder enc;
  enc.add(std::span<const uint8_t>(sender));
  enc.add(std::span<const uint8_t>(payload_canonical_bytes(payload)));
  enc.add(std::span<const uint8_t>(signature));
  enc.add(nonce);
  return sha256(enc.bytes());
}

Json Transaction::to_json() const {
  Json j;
  j["nonce"] = nonce;
  j["payload"] = payload_to_json(payload);
  j["sender"] = to_hex(sender);
  j["signature"] = to_hex(signature);
  j["tx_id"] = to_hex(tx_id);
  return j;
}

Transaction Transaction::from_json(const Json& j) {
  Transaction tx;
  tx.nonce = j.at("nonce").get<uint64_t>();
  tx.payload = payload_from_json(j.at("payload"));
  Bytes sender = from_hex(j.at("sender").get<std::string>());
  Bytes sig = from_hex(j.at("signature").get<std::string>());
  if (sender.size() != tx.sender.size() || sig.size() != tx.signature.size()) {
    fail(Errc::ParseError, "bad sender or signature length");
  }
  std::copy(sender.begin(), sender.end(), tx.sender.begin());
  std::copy(sig.begin(), sig.end(), tx.signature.begin());
  tx.tx_id = digest_from_hex(j.at("tx_id").get<std::string>());
  return tx;
}

Transaction make_transaction(const PublicKey& sender, Payload payload,
                             uint64_t nonce, const SignFn& sign) {
  Transaction tx;
  tx.sender = sender;
  tx.payload = std::move(payload);
  tx.nonce = nonce;
  tx.signature = sign(tx.signable_bytes());
  tx.tx_id = tx.compute_id();
  return tx;
}

Transaction make_transaction(const KeyPair& key, Payload payload,
                             uint64_t nonce) {
  return make_transaction(
      key.pub, std::move(payload), nonce,
      [&key](std::span<const uint8_t> msg) { return ed25519_sign(key.seed, msg); });
}

Digest32 Block::compute_hash() const {
  Bytes material;
  auto h = u64_be(height);
  material.insert(material.end(), h.begin(), h.end());
  material.insert(material.end(), prev_hash.begin(), prev_hash.end());
  for (const Transaction& tx : txs) {
    material.insert(material.end(), tx.tx_id.begin(), tx.tx_id.end());
  }
  return sha256(material);
}

Json Block::to_json() const {
  Json j;
  j["block_hash"] = to_hex(block_hash);
  j["height"] = height;
  j["prev_hash"] = to_hex(prev_hash);
  Json txs_json = Json::array();
  for (const Transaction& tx : txs) txs_json.push_back(tx.to_json());
  j["txs"] = txs_json;
  return j;
}

Block Block::from_json(const Json& j) {
  Block b;
  b.height = j.at("height").get<Height>();
  b.prev_hash = digest_from_hex(j.at("prev_hash").get<std::string>());
  b.block_hash = digest_from_hex(j.at("block_hash").get<std::string>());
  for (const Json& t : j.at("txs")) b.txs.push_back(Transaction::from_json(t));
  return b;
}

Ledger::Ledger(size_t block_capacity) : capacity_(block_capacity) {
  Block genesis;
  genesis.height = 0;
  genesis.block_hash = genesis.compute_hash();
  blocks_.push_back(std::move(genesis));
}

Digest32 Ledger::submit(const Transaction& tx) {
  if (tx.tx_id != tx.compute_id()) {
    fail(Errc::BadSignature, "transaction id does not match its content");
  }
  if (!ed25519_verify(tx.sender, tx.signable_bytes(), tx.signature)) {
    fail(Errc::BadSignature, "transaction signature does not verify");
  }
  std::string sender = to_hex(tx.sender);
  auto it = next_nonce_.find(sender);
  uint64_t expected = it == next_nonce_.end() ? 0 : it->second;
  if (tx.nonce < expected) {
    fail(Errc::StaleNonce, "nonce " + std::to_string(tx.nonce) +
                               " already used, next is " +
                               std::to_string(expected));
  }
  next_nonce_[sender] = tx.nonce + 1;
  pool_.push_back(tx);
  return tx.tx_id;
}

Block Ledger::produce_block() {
  Block b;
  b.height = blocks_.size();
  b.prev_hash = blocks_.back().block_hash;
  size_t take = std::min(capacity_, pool_.size());
  for (size_t i = 0; i < take; ++i) {
    b.txs.push_back(std::move(pool_.front()));
    pool_.pop_front();
  }
  b.block_hash = b.compute_hash();
  fold(b);
  blocks_.push_back(b);
  return blocks_.back();
}

void Ledger::produce_blocks(size_t count) {
  for (size_t i = 0; i < count; ++i) produce_block();
}

void Ledger::fold(const Block& b) {
  for (size_t i = 0; i < b.txs.size(); ++i) {
    const Transaction& tx = b.txs[i];
    state_.apply(tx.sender, tx.payload, tx.tx_id, b.height, i);
  }
}

LedgerState Ledger::speculative_state() const {
  LedgerState spec = state_;
  Height h = height() + 1;
  size_t i = 0;
  for (const Transaction& tx : pool_) {
    spec.apply(tx.sender, tx.payload, tx.tx_id, h, i++);
  }
  return spec;
}

uint64_t Ledger::next_nonce(const PublicKey& sender) const {
  auto it = next_nonce_.find(to_hex(sender));
  return it == next_nonce_.end() ? 0 : it->second;
}

const Transaction* Ledger::find_tx(const Digest32& tx_id) const {
  auto it = state_.tx_index.find(to_hex(tx_id));
  if (it == state_.tx_index.end()) return nullptr;
  const Block& b = blocks_[it->second.height];
  return &b.txs[it->second.index];
}

ChainCheck Ledger::verify_chain() const {
  for (size_t h = 0; h < blocks_.size(); ++h) {
    const Block& b = blocks_[h];
    if (b.height != h) {
      return {false, h, "height out of sequence"};
    }
    if (h > 0 && b.prev_hash != blocks_[h - 1].block_hash) {
      return {false, h, "prev_hash does not match parent"};
    }
    if (b.block_hash != b.compute_hash()) {
      return {false, h, "block hash does not match content"};
    }
    for (const Transaction& tx : b.txs) {
      if (tx.tx_id != tx.compute_id()) {
        return {false, h, "tx id does not match content"};
      }
      if (!ed25519_verify(tx.sender, tx.signable_bytes(), tx.signature)) {
        return {false, h, "tx signature does not verify"};
      }
    }
  }
  return {};
}

Json Ledger::to_json() const {
  Json j;
  j["block_capacity"] = capacity_;
  Json blocks_json = Json::array();
  for (const Block& b : blocks_) blocks_json.push_back(b.to_json());
  j["blocks"] = blocks_json;
  Json pool_json = Json::array();
  for (const Transaction& tx : pool_) pool_json.push_back(tx.to_json());
  j["pool"] = pool_json;
  return j;
}

Ledger Ledger::from_json(const Json& j) {
  Ledger ledger(j.at("block_capacity").get<size_t>());
  ledger.blocks_.clear();
  for (const Json& b : j.at("blocks")) {
    ledger.blocks_.push_back(Block::from_json(b));
  }
  if (ledger.blocks_.empty()) fail(Errc::ParseError, "ledger has no genesis");
  for (const Json& t : j.at("pool")) {
    ledger.pool_.push_back(Transaction::from_json(t));
  }
  ChainCheck check = ledger.verify_chain();
  if (!check.ok) {
    fail(Errc::IntegrityViolation, "chain invalid at height " +
                                       std::to_string(check.height) + ": " +
                                       check.reason);
  }
  // State and nonces are derived, never loaded.
  for (const Block& b : ledger.blocks_) {
    ledger.fold(b);
    for (const Transaction& tx : b.txs) {
      ledger.next_nonce_[to_hex(tx.sender)] = tx.nonce + 1;
    }
  }
  for (const Transaction& tx : ledger.pool_) {
    ledger.next_nonce_[to_hex(tx.sender)] = tx.nonce + 1;
  }
  return ledger;
}

}  // namespace ssi
