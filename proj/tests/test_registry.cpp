#include "doctest.h"
#include "ssi/errors.hpp"
#include "ssi/registry.hpp"

using namespace ssi;

namespace {

// One actor with a hot wallet: master plus one sub-key per label.
struct Person {
  Wallet wallet{WalletKind::Hot};

  explicit Person(Rng& rng, std::initializer_list<const char*> labels = {"id"}) {
    MasterKey master = generate_master(rng.bytes(32));
    wallet.add_master("master", master);
    for (const char* l : labels) wallet.add_subkey(l, derive_subkey(master, l));
  }
};

struct Fixture {
  Rng rng{2024};
  Ledger ledger;
  ContentStore store;
  SocialStore social;
  DidRegistry registry{ledger, store};

  std::string quick_did(Person& p, const std::string& key) {
    std::string did = registry.register_did(p.wallet, key, {}, rng);
    ledger.produce_block();
    return did;
  }
};

}  // namespace

TEST_CASE("register then resolve round-trips the document") {
  Fixture f;
  Person alice(f.rng);
  DdoDraft draft;
  draft.service.push_back({"inbox", "https://alice.example/in"});
  std::string did = f.registry.register_did(alice.wallet, "id", draft, f.rng);
  CHECK(is_valid_did(did));

  // Not included yet: resolution is by included state only.
  CHECK_THROWS_AS(f.registry.resolve(did), SsiError);
  f.ledger.produce_block();

  DidDocument doc = f.registry.resolve(did);
  CHECK(doc.id == did);
  CHECK(doc.public_key == alice.wallet.pub("id"));
  REQUIRE(doc.service.size() == 1);
  CHECK(doc.service[0].endpoint == "https://alice.example/in");

  const DidRecord& rec = f.registry.record(did);
  CHECK(rec.state == DidState::Registered);
  CHECK(rec.ddo_address == doc.address());
}

TEST_CASE("one key controls at most one identifier") {
  Fixture f;
  Person alice(f.rng, {"one", "two"});
  f.quick_did(alice, "one");
  CHECK_THROWS_WITH_AS(f.registry.register_did(alice.wallet, "one", {}, f.rng),
                       doctest::Contains("already controls"), SsiError);
  // A different sub-key of the same master is fine; that is the whole
  // point of registering several identifiers.
  CHECK_NOTHROW(f.registry.register_did(alice.wallet, "two", {}, f.rng));
}

TEST_CASE("distinct identifiers from one master share no visible bytes") {
  Fixture f;
  Person alice(f.rng, {"one", "two"});
  std::string a = f.quick_did(alice, "one");
  std::string b = f.quick_did(alice, "two");
  CHECK(a != b);
  CHECK(a.substr(0, 8) == "did:sim:");
  // Registered documents expose different keys.
  CHECK(f.registry.resolve(a).public_key != f.registry.resolve(b).public_key);
}

TEST_CASE("resolving the unknown and the revoked") {
  Fixture f;
  Person alice(f.rng);
  CHECK_THROWS_AS(
      f.registry.resolve(
          "did:sim:aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa"),
      SsiError);

  std::string did = f.quick_did(alice, "id");
  f.registry.revoke_did(alice.wallet, "id", did);
  f.ledger.produce_block();
  CHECK_THROWS_WITH_AS(f.registry.resolve(did), doctest::Contains("revoked"),
                       SsiError);
  // Revocation is terminal; even the controller cannot update.
  DidDocument doc;
  doc.id = did;
  CHECK_THROWS_AS(f.registry.update_document(alice.wallet, "id", did, doc),
                  SsiError);
}

TEST_CASE("dual resolution works both ways or not at all") {
  Fixture f;
  Person alice(f.rng);
  Person bob(f.rng);
  std::string a = f.quick_did(alice, "id");
  std::string b = f.quick_did(bob, "id");
  auto [da, db] = f.registry.dual_resolve(a, b);
  CHECK(da.id == a);
  CHECK(db.id == b);
  CHECK_THROWS_AS(
      f.registry.dual_resolve(
          a, "did:sim:aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa"),
      SsiError);
}

TEST_CASE("updates replace the document pointer, controller only") {
  Fixture f;
  Person alice(f.rng);
  Person mallory(f.rng);
  std::string did = f.quick_did(alice, "id");
  f.quick_did(mallory, "id");

  DidDocument doc = f.registry.resolve(did);
  doc.service.push_back({"chat", "https://alice.example/chat"});
  f.registry.update_document(alice.wallet, "id", did, doc);
  f.ledger.produce_block();
  CHECK(f.registry.resolve(did).service.size() == 1);
  CHECK(f.registry.record(did).state == DidState::Updated);

  CHECK_THROWS_WITH_AS(
      f.registry.update_document(mallory.wallet, "id", did, doc),
      doctest::Contains("does not control"), SsiError);

  // The document must speak about the did it is stored under.
  DidDocument other = f.registry.resolve(did);
  other.id = "did:sim:aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa";
  CHECK_THROWS_AS(f.registry.update_document(alice.wallet, "id", did, other),
                  SsiError);
}

TEST_CASE("delegate lists are validated up front") {
  Fixture f;
  Person owner(f.rng);
  Person d1(f.rng);
  Person d2(f.rng);
  std::string did = f.quick_did(owner, "id");
  std::string a = f.quick_did(d1, "id");
  std::string b = f.quick_did(d2, "id");

  CHECK_THROWS_AS(f.registry.set_delegates(owner.wallet, "id", did, {}, 1, 5),
                  SsiError);
  CHECK_THROWS_AS(
      f.registry.set_delegates(owner.wallet, "id", did, {a, b}, 3, 5),
      SsiError);  // threshold above list size
  CHECK_THROWS_AS(
      f.registry.set_delegates(owner.wallet, "id", did, {a, b}, 0, 5),
      SsiError);
  CHECK_THROWS_AS(
      f.registry.set_delegates(owner.wallet, "id", did, {a, a}, 1, 5),
      SsiError);  // duplicate
  CHECK_THROWS_AS(
      f.registry.set_delegates(owner.wallet, "id", did, {did}, 1, 5),
      SsiError);  // self
  CHECK_THROWS_AS(
      f.registry.set_delegates(
          owner.wallet, "id", did,
          {"did:sim:aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa"}, 1,
          5),
      SsiError);  // unregistered

  f.registry.set_delegates(owner.wallet, "id", did, {a, b}, 2, 5);
  f.ledger.produce_block();
  CHECK(f.registry.record(did).delegates == std::vector<std::string>{a, b});
  CHECK(f.registry.record(did).threshold == 2);
}

TEST_CASE("recovery: quorum and timelock gate the handover") {
  Fixture f;
  Person owner(f.rng, {"id", "fresh"});
  Person d1(f.rng);
  Person d2(f.rng);
  Person d3(f.rng);
  std::string did = f.quick_did(owner, "id");
  std::string a = f.quick_did(d1, "id");
  std::string b = f.quick_did(d2, "id");
  std::string c = f.quick_did(d3, "id");
  f.registry.set_delegates(owner.wallet, "id", did, {a, b, c}, 2, 3);
  f.ledger.produce_block();  // height 5

  CHECK_THROWS_WITH_AS(
      f.registry.finalize_recovery(owner.wallet, "fresh", "00"),
      doctest::Contains("proposal"), SsiError);

  std::string prop = f.registry.propose_recovery(owner.wallet, "fresh", did);
  f.ledger.produce_block();  // height 6, proposal opens here
  CHECK(f.registry.proposal(prop).opened_at == 6);
  CHECK(f.registry.record(did).state == DidState::Recovering);

  // No second proposal while one is open.
  CHECK_THROWS_AS(f.registry.propose_recovery(owner.wallet, "fresh", did),
                  SsiError);

  f.registry.approve_recovery(d1.wallet, "id", a, prop);
  f.ledger.produce_block();  // height 7
  CHECK_THROWS_WITH_AS(f.registry.finalize_recovery(owner.wallet, "fresh", prop),
                       doctest::Contains("approvals"), SsiError);
  CHECK_THROWS_AS(f.registry.approve_recovery(d1.wallet, "id", a, prop),
                  SsiError);  // duplicate
  CHECK_THROWS_AS(f.registry.approve_recovery(d2.wallet, "id", c, prop),
                  SsiError);  // b's wallet cannot speak for c
  CHECK_THROWS_AS(f.registry.approve_recovery(owner.wallet, "id", did, prop),
                  SsiError);  // owner is not on the list

  f.registry.approve_recovery(d2.wallet, "id", b, prop);
  f.ledger.produce_block();  // height 8, quorum met, timelock not over
  CHECK_THROWS_WITH_AS(f.registry.finalize_recovery(owner.wallet, "fresh", prop),
                       doctest::Contains("finalize allowed at height"),
                       SsiError);

  f.ledger.produce_block();  // height 9 = opened_at 6 + timelock 3
  f.registry.finalize_recovery(owner.wallet, "fresh", prop);
  f.ledger.produce_block();

  CHECK(f.registry.record(did).state == DidState::Recovered);
  CHECK(f.registry.record(did).controller == owner.wallet.pub("fresh"));
  CHECK(f.registry.proposal(prop).status == ProposalStatus::Finalized);

  // The replaced key lost control.
  DidDocument doc = f.registry.resolve(did);
  CHECK_THROWS_WITH_AS(f.registry.update_document(owner.wallet, "id", did, doc),
                       doctest::Contains("does not control"), SsiError);
  CHECK_NOTHROW(f.registry.update_document(owner.wallet, "fresh", did, doc));

  // Closed proposals take no further traffic.
  CHECK_THROWS_AS(f.registry.approve_recovery(d3.wallet, "id", c, prop),
                  SsiError);
  CHECK_THROWS_AS(f.registry.finalize_recovery(owner.wallet, "fresh", prop),
                  SsiError);
}

TEST_CASE("recovery needs delegates to exist first") {
  Fixture f;
  Person owner(f.rng, {"id", "fresh"});
  std::string did = f.quick_did(owner, "id");
  CHECK_THROWS_WITH_AS(f.registry.propose_recovery(owner.wallet, "fresh", did),
                       doctest::Contains("delegates"), SsiError);
}

TEST_CASE("the replacement key must be unused") {
  Fixture f;
  Person owner(f.rng, {"id"});
  Person d1(f.rng, {"id", "spare"});
  std::string did = f.quick_did(owner, "id");
  std::string a = f.quick_did(d1, "id");
  f.registry.set_delegates(owner.wallet, "id", did, {a}, 1, 1);
  f.ledger.produce_block();
  // d1's "id" key already controls a; proposing it for `did` would tie
  // two identifiers to one key.
  CHECK_THROWS_AS(f.registry.propose_recovery(d1.wallet, "id", did), SsiError);
}

TEST_CASE("cancel puts the record back exactly as it was") {
  Fixture f;
  Person owner(f.rng, {"id", "fresh"});
  Person d1(f.rng);
  std::string did = f.quick_did(owner, "id");
  std::string a = f.quick_did(d1, "id");
  f.registry.set_delegates(owner.wallet, "id", did, {a}, 1, 2);
  f.ledger.produce_block();
  DidState before = f.registry.record(did).state;

  std::string prop = f.registry.propose_recovery(owner.wallet, "fresh", did);
  f.ledger.produce_block();
  CHECK(f.registry.record(did).state == DidState::Recovering);

  // Only the current controller can cancel; the proposed key is not in
  // charge yet.
  CHECK_THROWS_AS(f.registry.cancel_recovery(owner.wallet, "fresh", prop),
                  SsiError);
  f.registry.cancel_recovery(owner.wallet, "id", prop);
  f.ledger.produce_block();

  CHECK(f.registry.record(did).state == before);
  CHECK(f.registry.proposal(prop).status == ProposalStatus::Cancelled);

  // A cancelled recovery frees the did for a new proposal with a fresh id.
  std::string prop2 = f.registry.propose_recovery(owner.wallet, "fresh", did);
  CHECK(prop2 != prop);
}

TEST_CASE("social binding ties a did to a profile post") {
  Fixture f;
  Person alice(f.rng);
  std::string did = f.quick_did(alice, "id");

  SocialCheck none = f.registry.verify_social(did, f.social);
  CHECK_FALSE(none.post_found);

  SocialBinding binding = f.registry.bind_social(
      alice.wallet, "id", did, "https://s.example/alice", f.social);
  f.ledger.produce_block();

  CHECK(f.social.get_post(binding.post_url).has_value());
  SocialCheck check = f.registry.verify_social(did, f.social);
  CHECK(check.post_found);
  CHECK(check.signature_valid);
  CHECK(check.ok());

  // Document carries the binding after the update.
  DidDocument doc = f.registry.resolve(did);
  REQUIRE(doc.social.has_value());
  CHECK(doc.social->profile_url == "https://s.example/alice");

  // Post vanishes: binding no longer verifies.
  f.social.delete_post(binding.post_url);
  CHECK_FALSE(f.registry.verify_social(did, f.social).post_found);
}

TEST_CASE("a forged social binding fails the signature check") {
  Fixture f;
  Person alice(f.rng);
  Person eve(f.rng);
  std::string did = f.quick_did(alice, "id");
  std::string eve_did = f.quick_did(eve, "id");
  f.registry.bind_social(alice.wallet, "id", did, "https://s.example/alice",
                         f.social);
  f.ledger.produce_block();

  // Eve copies alice's document binding into her own document. The
  // statement names alice's did and was signed by alice's key, so on
  // eve's record both checks fail.
  DidDocument alice_doc = f.registry.resolve(did);
  DidDocument eve_doc = f.registry.resolve(eve_did);
  eve_doc.social = alice_doc.social;
  f.registry.update_document(eve.wallet, "id", eve_did, eve_doc);
  f.ledger.produce_block();

  SocialCheck check = f.registry.verify_social(eve_did, f.social);
  CHECK_FALSE(check.post_found);  // post names alice's did, not eve's
}
