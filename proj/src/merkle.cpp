#include "ssi/merkle.hpp"

#include "ssi/errors.hpp"

namespace ssi {

Digest32 MerkleTree::leaf_hash(const Digest32& leaf) {
  Bytes material;
  material.reserve(1 + leaf.size());
  material.push_back(0x00);
  material.insert(material.end(), leaf.begin(), leaf.end());
  return sha256(material);
}

Digest32 MerkleTree::node_hash(const Digest32& left, const Digest32& right) {
  Bytes material;
  material.reserve(1 + left.size() + right.size());
  material.push_back(0x01);
  material.insert(material.end(), left.begin(), left.end());
  material.insert(material.end(), right.begin(), right.end());
  return sha256(material);
}

MerkleTree MerkleTree::build(const std::vector<Digest32>& leaves) {
  if (leaves.empty()) fail(Errc::EmptyBatch, "cannot build a tree of nothing");
  MerkleTree tree;
  std::vector<Digest32> level;
  level.reserve(leaves.size());
  for (const Digest32& d : leaves) level.push_back(leaf_hash(d));
  tree.levels_.push_back(std::move(level));
  while (tree.levels_.back().size() > 1) {
    const std::vector<Digest32>& prev = tree.levels_.back();
    std::vector<Digest32> next;
    next.reserve((prev.size() + 1) / 2);
    for (size_t i = 0; i + 1 < prev.size(); i += 2) {
      next.push_back(node_hash(prev[i], prev[i + 1]));
    }
    if (prev.size() % 2 == 1) next.push_back(prev.back());
    tree.levels_.push_back(std::move(next));
  }
  return tree;
}

InclusionProof MerkleTree::prove(size_t leaf_index) const {
  if (leaf_index >= leaf_count()) {
    fail(Errc::IndexOutOfRange, "leaf " + std::to_string(leaf_index) +
                                    " of " + std::to_string(leaf_count()));
  }
  InclusionProof proof;
  proof.leaf_index = leaf_index;
  size_t i = leaf_index;
  for (size_t level = 0; level + 1 < levels_.size(); ++level) {
    const std::vector<Digest32>& nodes = levels_[level];
    size_t sibling = i ^ 1;
    if (sibling < nodes.size()) {
      proof.siblings.push_back({nodes[sibling], (i % 2 == 0)
                                                    ? SiblingSide::Right
                                                    : SiblingSide::Left});
    }
    // else: promoted node, nothing to combine with at this level
    i /= 2;
  }
  return proof;
}

bool MerkleTree::verify(const Digest32& leaf, const InclusionProof& proof,
                        const Digest32& root) {
  Digest32 cur = leaf_hash(leaf);
  for (const ProofStep& step : proof.siblings) {
    cur = step.side == SiblingSide::Left ? node_hash(step.digest, cur)
                                         : node_hash(cur, step.digest);
  }
  return cur == root;
}

}  // namespace ssi
