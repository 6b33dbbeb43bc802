#include "doctest.h"
#include "ssi/errors.hpp"
#include "ssi/merkle.hpp"

using namespace ssi;

namespace {

// Independent root computation, written as a plain recursion: pair up
// a level, promote an odd tail unchanged, recurse on the parents.
Digest32 naive_root(std::vector<Digest32> level) {
  if (level.size() == 1) return level[0];
  std::vector<Digest32> parents;
  for (size_t i = 0; i + 1 < level.size(); i += 2) {
    parents.push_back(MerkleTree::node_hash(level[i], level[i + 1]));
  }
  if (level.size() % 2 == 1) parents.push_back(level.back());
  return naive_root(std::move(parents));
}

Digest32 oracle_root(const std::vector<Digest32>& leaves) {
  std::vector<Digest32> hashed;
  for (const Digest32& l : leaves) hashed.push_back(MerkleTree::leaf_hash(l));
  return naive_root(std::move(hashed));
}

std::vector<Digest32> some_leaves(size_t n, uint64_t seed) {
  Rng rng(seed);
  std::vector<Digest32> out;
  for (size_t i = 0; i < n; ++i) out.push_back(rng.block32());
  return out;
}

}  // namespace

TEST_CASE("root matches oracle and every proof verifies, n = 1..16") {
  for (size_t n = 1; n <= 16; ++n) {
    auto leaves = some_leaves(n, 100 + n);
    MerkleTree tree = MerkleTree::build(leaves);
    CHECK(tree.root() == oracle_root(leaves));
    for (size_t i = 0; i < n; ++i) {
      InclusionProof proof = tree.prove(i);
      CHECK(MerkleTree::verify(leaves[i], proof, tree.root()));
    }
  }
}

TEST_CASE("a proof fails for the wrong leaf, wrong root, wrong position") {
  auto leaves = some_leaves(7, 4);
  MerkleTree tree = MerkleTree::build(leaves);
  InclusionProof proof = tree.prove(3);

  CHECK_FALSE(MerkleTree::verify(leaves[4], proof, tree.root()));

  Digest32 wrong_root = tree.root();
  wrong_root[0] ^= 1;
  CHECK_FALSE(MerkleTree::verify(leaves[3], proof, wrong_root));

  InclusionProof other = tree.prove(4);
  CHECK_FALSE(MerkleTree::verify(leaves[3], other, tree.root()));
}

TEST_CASE("interior nodes cannot be replayed as leaves") {
  // With shared prefixes an attacker could present (left||right) of an
  // interior node as a "leaf". Domain separation must make the forged
  // leaf hash differently.
  auto leaves = some_leaves(4, 5);
  MerkleTree tree = MerkleTree::build(leaves);

  Digest32 l0 = MerkleTree::leaf_hash(leaves[0]);
  Digest32 l1 = MerkleTree::leaf_hash(leaves[1]);
  Digest32 interior = MerkleTree::node_hash(l0, l1);

  // Proof for the forged leaf: the sibling is the other interior node.
  Digest32 l2 = MerkleTree::leaf_hash(leaves[2]);
  Digest32 l3 = MerkleTree::leaf_hash(leaves[3]);
  Digest32 sibling = MerkleTree::node_hash(l2, l3);
  InclusionProof forged;
  forged.leaf_index = 0;
  forged.siblings.push_back({sibling, SiblingSide::Right});

  CHECK_FALSE(MerkleTree::verify(interior, forged, tree.root()));
}

TEST_CASE("empty batches and bad indices are rejected") {
  CHECK_THROWS_AS(MerkleTree::build({}), SsiError);
  auto leaves = some_leaves(3, 6);
  MerkleTree tree = MerkleTree::build(leaves);
  CHECK_THROWS_AS(tree.prove(3), SsiError);
}

TEST_CASE("single leaf: root is the hashed leaf, proof is empty") {
  auto leaves = some_leaves(1, 7);
  MerkleTree tree = MerkleTree::build(leaves);
  CHECK(tree.root() == MerkleTree::leaf_hash(leaves[0]));
  InclusionProof proof = tree.prove(0);
  CHECK(proof.siblings.empty());
  CHECK(MerkleTree::verify(leaves[0], proof, tree.root()));
}
