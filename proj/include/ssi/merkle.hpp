#pragma once

#include "ssi/crypto.hpp"

namespace ssi {

enum class SiblingSide : uint8_t { Left, Right };

struct ProofStep {
  Digest32 digest{};
  SiblingSide side = SiblingSide::Left;  // which side the sibling sits on
};

struct InclusionProof {
  size_t leaf_index = 0;
  std::vector<ProofStep> siblings;
};

/// Binary hash tree over content digests. Leaves and interior nodes
/// hash under different domain prefixes (0x00 / 0x01) so an interior
/// node can never be replayed as a leaf. An odd node at any level is
/// promoted unchanged, not duplicated.
class MerkleTree {
 public:
  static MerkleTree build(const std::vector<Digest32>& leaves);

  const Digest32& root() const { return levels_.back().front(); }
  size_t leaf_count() const { return levels_.front().size(); }

  InclusionProof prove(size_t leaf_index) const;

  static bool verify(const Digest32& leaf, const InclusionProof& proof,
                     const Digest32& root);

  static Digest32 leaf_hash(const Digest32& leaf);
  static Digest32 node_hash(const Digest32& left, const Digest32& right);

 private:
  MerkleTree() = default;
  std::vector<std::vector<Digest32>> levels_;  // levels_[0] = hashed leaves
};

}  // namespace ssi
