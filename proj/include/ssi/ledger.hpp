#pragma once

#include <deque>
#include <functional>

#include "ssi/state.hpp"

namespace ssi {

struct Transaction {
  Digest32 tx_id{};
  PublicKey sender{};
  Payload payload;
  Signature signature{};
  uint64_t nonce = 0;

  /// What the sender signs: LP(sender) LP(canonical payload) LP(nonce).
  Bytes signable_bytes() const;
  /// H(LP(sender) LP(canonical payload) LP(signature) LP(nonce)).
  Digest32 compute_id() const;

  Json to_json() const;
  static Transaction from_json(const Json& j);
};

using SignFn = std::function<Signature(std::span<const uint8_t>)>;

Transaction make_transaction(const PublicKey& sender, Payload payload,
                             uint64_t nonce, const SignFn& sign);
Transaction make_transaction(const KeyPair& key, Payload payload,
                             uint64_t nonce);

struct Block {
  Height height = 0;
  Digest32 prev_hash{};
  std::vector<Transaction> txs;
  Digest32 block_hash{};

  /// H(height(8) || prev_hash(32) || tx ids), raw concatenation.
  Digest32 compute_hash() const;

  Json to_json() const;
  static Block from_json(const Json& j);
};

struct ChainCheck {
  bool ok = true;
  Height height = 0;      // first failing block when !ok
  std::string reason;
};

/// Single-producer ledger. Logical time is block height; there is no
/// clock anywhere else. Submitted transactions wait in a pool until
/// produce_block() includes them (oldest first, up to the capacity).
/// Invalid-against-state transactions are still included and their
/// failure recorded, like a real chain paying gas for a revert.
class Ledger {
 public:
  static constexpr size_t kDefaultBlockCapacity = 64;

  explicit Ledger(size_t block_capacity = kDefaultBlockCapacity);

  /// Admission checks only: signature, id, nonce freshness. State
  /// validity is decided at inclusion time.
  Digest32 submit(const Transaction& tx);

  Block produce_block();
  void produce_blocks(size_t count);

  Height height() const { return blocks_.back().height; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::deque<Transaction>& pool() const { return pool_; }
  size_t block_capacity() const { return capacity_; }

  const LedgerState& state() const { return state_; }

  /// State as it would look if the whole pool were included now. Used
  /// to validate operations eagerly without waiting for a block.
  LedgerState speculative_state() const;

  uint64_t next_nonce(const PublicKey& sender) const;
  const Transaction* find_tx(const Digest32& tx_id) const;

  ChainCheck verify_chain() const;

  Json to_json() const;
  static Ledger from_json(const Json& j);

 private:
  void fold(const Block& b);

  size_t capacity_;
  std::vector<Block> blocks_;
  std::deque<Transaction> pool_;
  LedgerState state_;
  std::map<std::string, uint64_t> next_nonce_;  // sender hex -> next expected
};

}  // namespace ssi
