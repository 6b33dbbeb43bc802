#include "doctest.h"
#include "ssi/anchor.hpp"
#include "ssi/errors.hpp"

using namespace ssi;

namespace {

Digest32 doc(const std::string& text) { return sha256(str_bytes(text)); }

struct AnchorFixture {
  Rng rng{31};
  Ledger ledger;
  AnchorService service{keypair_from_seed(rng.bytes(32))};
};

}  // namespace

TEST_CASE("a batch of digests lands as one transaction with receipts") {
  AnchorFixture f;
  std::vector<std::string> texts = {"contract v1", "contract v2", "appendix"};
  for (const std::string& t : texts) f.service.add(doc(t));
  CHECK(f.service.pending_count() == 3);

  std::vector<AnchorReceipt> receipts = f.service.flush(f.ledger);
  REQUIRE(receipts.size() == 3);
  CHECK(f.service.pending_count() == 0);

  // One root, one transaction, shared by the whole batch.
  CHECK(receipts[0].tx_id == receipts[1].tx_id);
  CHECK(receipts[0].root == receipts[2].root);
  CHECK(f.ledger.state().anchors.size() == 1);

  for (size_t i = 0; i < texts.size(); ++i) {
    AnchorCheck check =
        verify_anchored(str_bytes(texts[i]), receipts[i], f.ledger);
    CHECK(check.ok);
    CHECK(check.reason.empty());
  }
}

TEST_CASE("verification pinpoints what went wrong") {
  AnchorFixture f;
  f.service.add(doc("original"));
  f.service.add(doc("padding"));
  AnchorReceipt receipt = f.service.flush(f.ledger)[0];

  SUBCASE("content edited after anchoring") {
    AnchorCheck check =
        verify_anchored(str_bytes("original!"), receipt, f.ledger);
    CHECK_FALSE(check.ok);
    CHECK(check.reason == "content does not match the receipt digest");
  }
  SUBCASE("proof does not reach the root") {
    receipt.proof.siblings[0].digest[0] ^= 0x01;
    AnchorCheck check =
        verify_anchored(str_bytes("original"), receipt, f.ledger);
    CHECK_FALSE(check.ok);
    CHECK(check.reason == "inclusion proof does not reach the root");
  }
  SUBCASE("receipt names a transaction that never happened") {
    receipt.tx_id[31] ^= 0x01;
    AnchorCheck check =
        verify_anchored(str_bytes("original"), receipt, f.ledger);
    CHECK_FALSE(check.ok);
    CHECK(check.reason == "anchoring transaction is not on the ledger");
  }
  SUBCASE("receipt points at a transaction anchoring another root") {
    f.service.add(doc("unrelated"));
    AnchorReceipt other = f.service.flush(f.ledger)[0];
    receipt.tx_id = other.tx_id;
    // The proof still reaches receipt.root, but that transaction
    // anchored a different batch.
    AnchorCheck check =
        verify_anchored(str_bytes("original"), receipt, f.ledger);
    CHECK_FALSE(check.ok);
    CHECK(check.reason == "transaction anchors a different root");
  }
}

TEST_CASE("batches chunk at the limit, one transaction each") {
  Rng rng{32};
  Ledger ledger;
  AnchorService service{keypair_from_seed(rng.bytes(32)), 4};
  for (int i = 0; i < 9; ++i) service.add(doc("doc " + std::to_string(i)));

  std::vector<AnchorReceipt> receipts = service.flush(ledger);
  REQUIRE(receipts.size() == 9);
  CHECK(ledger.state().anchors.size() == 3);  // 4 + 4 + 1

  // Receipts come back in add order; chunk boundaries show in the roots.
  CHECK(receipts[0].root == receipts[3].root);
  CHECK(receipts[3].root != receipts[4].root);
  CHECK(receipts[4].root == receipts[7].root);
  CHECK(receipts[7].root != receipts[8].root);
  for (int i = 0; i < 9; ++i) {
    CHECK(verify_anchored(str_bytes("doc " + std::to_string(i)), receipts[i],
                          ledger)
              .ok);
  }
}

TEST_CASE("flushing nothing is an error, not a silent no-op") {
  AnchorFixture f;
  CHECK_THROWS_WITH_AS(f.service.flush(f.ledger),
                       doctest::Contains("nothing pending"), SsiError);
}

TEST_CASE("a service reloaded mid-batch carries its pending digests") {
  AnchorFixture f;
  f.service.add(doc("queued before the restart"));
  f.service.add(doc("also queued"));

  AnchorService restored =
      AnchorService::from_json(Json::parse(f.service.to_json().dump()));
  CHECK(restored.pending_count() == 2);
  CHECK(restored.pub() == f.service.pub());

  std::vector<AnchorReceipt> receipts = restored.flush(f.ledger);
  CHECK(verify_anchored(str_bytes("queued before the restart"), receipts[0],
                        f.ledger)
            .ok);
}

TEST_CASE("receipts survive serialization") {
  AnchorFixture f;
  for (int i = 0; i < 5; ++i) f.service.add(doc("r" + std::to_string(i)));
  AnchorReceipt receipt = f.service.flush(f.ledger)[2];

  AnchorReceipt restored =
      AnchorReceipt::from_json(Json::parse(receipt.to_json().dump()));
  CHECK(restored.proof.leaf_index == receipt.proof.leaf_index);
  CHECK(restored.proof.siblings.size() == receipt.proof.siblings.size());
  CHECK(verify_anchored(str_bytes("r2"), restored, f.ledger).ok);
}
