#include "doctest.h"
#include "ssi/credentials.hpp"
#include "ssi/errors.hpp"

using namespace ssi;

namespace {

struct Party {
  Wallet wallet{WalletKind::Hot};
  std::string did;
};

// Issuer, holder and verifier, all registered and included.
struct CredFixture {
  Rng rng{7};
  Ledger ledger;
  ContentStore store;
  DidRegistry registry{ledger, store};
  Party issuer, holder, verifier;

  CredFixture() {
    for (Party* p : {&issuer, &holder, &verifier}) {
      MasterKey master = generate_master(rng.bytes(32));
      p->wallet.add_master("master", master);
      p->wallet.add_subkey("id", derive_subkey(master, "id"));
      p->did = registry.register_did(p->wallet, "id", {}, rng);
    }
    ledger.produce_block();
  }

  IssueResult issue_hashed(const std::vector<Claim>& claims) {
    return issue(registry, issuer.wallet, "id", issuer.did, holder.did, claims,
                 CredScheme::Hashed, rng);
  }
};

const std::vector<Claim> kDegreeClaims = {
    {"degree", "MSc Computer Science"},
    {"dob", "1990-04-01"},
    {"name", "Alice Example"},
};

}  // namespace

TEST_CASE("plain credentials carry every claim in the clear") {
  CredFixture f;
  IssueResult r = issue(f.registry, f.issuer.wallet, "id", f.issuer.did,
                        f.holder.did, kDegreeClaims, CredScheme::Plain, f.rng);
  REQUIRE(r.credentials.size() == 1);
  CHECK(r.secrets.empty());

  const Credential& c = r.credentials[0];
  CHECK(c.claims.size() == 3);
  CHECK(c.attributes.empty());
  CHECK(c.cred_id == sha256(c.signable_bytes()));
  CHECK(c.issued_at == f.ledger.height());

  PresentationReport rep = verify_credential(f.registry, c);
  CHECK(rep.valid());
  CHECK(rep.failures.empty());
}

TEST_CASE("atomic issuance splits claims so each travels alone") {
  CredFixture f;
  IssueResult r = issue(f.registry, f.issuer.wallet, "id", f.issuer.did,
                        f.holder.did, kDegreeClaims, CredScheme::Atomic, f.rng);
  REQUIRE(r.credentials.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    REQUIRE(r.credentials[i].claims.size() == 1);
    CHECK(r.credentials[i].claims[0].name == kDegreeClaims[i].name);
    CHECK(verify_credential(f.registry, r.credentials[i]).valid());
  }
  // Three independently signed documents, three ids.
  CHECK(r.credentials[0].cred_id != r.credentials[1].cred_id);
  CHECK(r.credentials[1].cred_id != r.credentials[2].cred_id);
}

TEST_CASE("hashed credentials never embed the values") {
  CredFixture f;
  IssueResult r = f.issue_hashed(kDegreeClaims);
  REQUIRE(r.credentials.size() == 1);
  const Credential& c = r.credentials[0];
  CHECK(c.claims.empty());
  REQUIRE(c.attributes.size() == 3);
  CHECK(r.secrets.size() == 3);

  std::string serialized = c.to_json().dump();
  for (const Claim& claim : kDegreeClaims) {
    CHECK(serialized.find(claim.value) == std::string::npos);
    CHECK(serialized.find(claim.name) != std::string::npos);
  }

  // Digests recompute from the private material.
  for (const SaltedAttribute& a : c.attributes) {
    const DisclosureSecret& s = r.secrets.at(a.name);
    CHECK(salted_attribute_digest(a.name, s.value, s.nonce) == a.digest);
  }
}

TEST_CASE("equal values leave unrelated digests behind") {
  CredFixture f;
  IssueResult one = f.issue_hashed({{"city", "Utrecht"}});
  IssueResult two = f.issue_hashed({{"city", "Utrecht"}});
  CHECK(one.credentials[0].attributes[0].digest !=
        two.credentials[0].attributes[0].digest);
}

TEST_CASE("issuance rejects malformed claim sets") {
  CredFixture f;
  auto issue_with = [&](std::vector<Claim> claims) {
    return issue(f.registry, f.issuer.wallet, "id", f.issuer.did, f.holder.did,
                 claims, CredScheme::Plain, f.rng);
  };
  CHECK_THROWS_AS(issue_with({}), SsiError);
  CHECK_THROWS_AS(issue_with({{"", "x"}}), SsiError);
  CHECK_THROWS_WITH_AS(issue_with({{"a", "1"}, {"a", "2"}}),
                       doctest::Contains("appears twice"), SsiError);
}

TEST_CASE("only the issuer's controller key can issue or revoke") {
  CredFixture f;
  CHECK_THROWS_WITH_AS(
      issue(f.registry, f.holder.wallet, "id", f.issuer.did, f.holder.did,
            kDegreeClaims, CredScheme::Plain, f.rng),
      doctest::Contains("does not control"), SsiError);
  CHECK_THROWS_AS(
      issue(f.registry, f.issuer.wallet, "id",
            "did:sim:aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa",
            f.holder.did, kDegreeClaims, CredScheme::Plain, f.rng),
      SsiError);

  IssueResult r = issue(f.registry, f.issuer.wallet, "id", f.issuer.did,
                        f.holder.did, kDegreeClaims, CredScheme::Plain, f.rng);
  CHECK_THROWS_WITH_AS(
      revoke_credential(f.registry, f.holder.wallet, "id", r.credentials[0]),
      doctest::Contains("does not control"), SsiError);
}

TEST_CASE("predicate scheme is not a direct issue target") {
  CredFixture f;
  CHECK_THROWS_WITH_AS(
      issue(f.registry, f.issuer.wallet, "id", f.issuer.did, f.holder.did,
            kDegreeClaims, CredScheme::Predicate, f.rng),
      doctest::Contains("issue_predicate"), SsiError);
}

TEST_CASE("predicate truth table over one source claim") {
  CredFixture f;
  Claim age{"age", "25"};
  auto attest = [&](const std::string& pred) {
    return issue_predicate(f.registry, f.issuer.wallet, "id", f.issuer.did,
                           f.holder.did, age, pred);
  };

  for (const char* pred : {"age>=18", "age>=25", "age<=25", "age<=30",
                           "age==25"}) {
    Credential c = attest(pred);
    REQUIRE(c.claims.size() == 1);
    CHECK(c.claims[0].name == pred);
    CHECK(c.claims[0].value == "true");
    CHECK(verify_credential(f.registry, c).valid());
    // The source value is not among the attested claims.
    for (const Json& cl : c.to_json().at("claims")) {
      CHECK(cl.at("value").get<std::string>() == "true");
    }
  }
  for (const char* pred : {"age>=26", "age<=24", "age==24"}) {
    CHECK_THROWS_WITH_AS(attest(pred), doctest::Contains("does not hold"),
                         SsiError);
  }
}

TEST_CASE("predicate parsing failures") {
  CredFixture f;
  Claim age{"age", "25"};
  auto attest = [&](Claim source, const std::string& pred) {
    return issue_predicate(f.registry, f.issuer.wallet, "id", f.issuer.did,
                           f.holder.did, source, pred);
  };
  CHECK_THROWS_AS(attest(age, "age>18"), SsiError);      // bare > not offered
  CHECK_THROWS_AS(attest(age, "age>=old"), SsiError);    // bound not a number
  CHECK_THROWS_AS(attest(age, ">=18"), SsiError);        // no claim name
  CHECK_THROWS_AS(attest(age, "height>=18"), SsiError);  // wrong source claim
  CHECK_THROWS_AS(attest({"age", "unknown"}, "age>=18"),
                  SsiError);  // source value not a number
}

TEST_CASE("selective disclosure shows a subset and hides the rest") {
  CredFixture f;
  IssueResult r = f.issue_hashed(kDegreeClaims);
  const Credential& cred = r.credentials[0];

  Presentation p = make_presentation(f.registry, f.holder.wallet, "id", cred,
                                     r.secrets, {"degree"}, f.verifier.did);
  REQUIRE(p.disclosed.size() == 1);
  CHECK(p.disclosed[0].value == "MSc Computer Science");

  PresentationReport rep = verify_presentation(f.registry, p, f.verifier.did);
  CHECK(rep.valid());
  CHECK(rep.undisclosed == std::vector<std::string>{"dob", "name"});

  // The hidden values are not recoverable from the wire form.
  std::string serialized = p.to_json().dump();
  CHECK(serialized.find("1990-04-01") == std::string::npos);
  CHECK(serialized.find("Alice Example") == std::string::npos);
  CHECK(serialized.find("MSc Computer Science") != std::string::npos);
}

TEST_CASE("full and empty disclosure are both legal") {
  CredFixture f;
  IssueResult r = f.issue_hashed(kDegreeClaims);
  const Credential& cred = r.credentials[0];

  Presentation all =
      make_presentation(f.registry, f.holder.wallet, "id", cred, r.secrets,
                        {"degree", "dob", "name"}, f.verifier.did);
  PresentationReport rep_all =
      verify_presentation(f.registry, all, f.verifier.did);
  CHECK(rep_all.valid());
  CHECK(rep_all.undisclosed.empty());

  Presentation none = make_presentation(f.registry, f.holder.wallet, "id",
                                        cred, r.secrets, {}, f.verifier.did);
  CHECK(none.disclosed.empty());
  PresentationReport rep_none =
      verify_presentation(f.registry, none, f.verifier.did);
  CHECK(rep_none.valid());
  CHECK(rep_none.undisclosed.size() == 3);
}

TEST_CASE("presentation construction guards") {
  CredFixture f;
  IssueResult hashed = f.issue_hashed(kDegreeClaims);
  IssueResult plain =
      issue(f.registry, f.issuer.wallet, "id", f.issuer.did, f.holder.did,
            kDegreeClaims, CredScheme::Plain, f.rng);

  CHECK_THROWS_AS(
      make_presentation(f.registry, f.holder.wallet, "id",
                        plain.credentials[0], {}, {}, f.verifier.did),
      SsiError);  // only hashed credentials are presented
  CHECK_THROWS_WITH_AS(
      make_presentation(f.registry, f.verifier.wallet, "id",
                        hashed.credentials[0], hashed.secrets, {"degree"},
                        f.verifier.did),
      doctest::Contains("does not control"), SsiError);
  CHECK_THROWS_WITH_AS(
      make_presentation(f.registry, f.holder.wallet, "id",
                        hashed.credentials[0], hashed.secrets, {"salary"},
                        f.verifier.did),
      doctest::Contains("no attribute"), SsiError);

  std::map<std::string, DisclosureSecret> missing = hashed.secrets;
  missing.erase("degree");
  CHECK_THROWS_WITH_AS(
      make_presentation(f.registry, f.holder.wallet, "id",
                        hashed.credentials[0], missing, {"degree"},
                        f.verifier.did),
      doctest::Contains("no disclosure secret"), SsiError);
}

TEST_CASE("tampering is caught wherever it happens") {
  CredFixture f;
  IssueResult r = f.issue_hashed(kDegreeClaims);
  Presentation p =
      make_presentation(f.registry, f.holder.wallet, "id", r.credentials[0],
                        r.secrets, {"degree", "dob"}, f.verifier.did);

  SUBCASE("disclosed value changed") {
    p.disclosed[0].value = "PhD Computer Science";
    PresentationReport rep = verify_presentation(f.registry, p, f.verifier.did);
    CHECK_FALSE(rep.digests_ok);
    CHECK_FALSE(rep.valid());
    // The credential itself is untouched, so the issuer still stands
    // behind it; only the disclosure is bogus.
    CHECK(rep.issuer_sig_ok);
  }
  SUBCASE("disclosed nonce changed") {
    p.disclosed[1].nonce[0] ^= 0x01;
    PresentationReport rep = verify_presentation(f.registry, p, f.verifier.did);
    CHECK_FALSE(rep.digests_ok);
    CHECK_FALSE(rep.valid());
  }
  SUBCASE("attribute digest rewritten inside the credential") {
    p.credential.attributes[0].digest[5] ^= 0x40;
    PresentationReport rep = verify_presentation(f.registry, p, f.verifier.did);
    CHECK_FALSE(rep.cred_id_ok);
    CHECK_FALSE(rep.valid());
  }
  SUBCASE("holder signature replayed to another audience") {
    PresentationReport rep = verify_presentation(f.registry, p, f.holder.did);
    CHECK_FALSE(rep.audience_ok);
    CHECK_FALSE(rep.valid());
    CHECK(rep.digests_ok);
  }
  SUBCASE("audience string edited after signing") {
    p.audience = f.holder.did;
    PresentationReport rep = verify_presentation(f.registry, p, f.holder.did);
    CHECK(rep.audience_ok);
    CHECK_FALSE(rep.holder_sig_ok);  // signature covers the audience
    CHECK_FALSE(rep.valid());
  }
}

TEST_CASE("revocation flips every later verification") {
  CredFixture f;
  IssueResult r = f.issue_hashed(kDegreeClaims);
  const Credential& cred = r.credentials[0];
  Presentation p = make_presentation(f.registry, f.holder.wallet, "id", cred,
                                     r.secrets, {"degree"}, f.verifier.did);
  CHECK(verify_presentation(f.registry, p, f.verifier.did).valid());
  CHECK_FALSE(is_revoked(f.registry, cred));

  revoke_credential(f.registry, f.issuer.wallet, "id", cred);
  // Revocation is a ledger fact; it counts once included.
  CHECK_FALSE(is_revoked(f.registry, cred));
  f.ledger.produce_block();
  CHECK(is_revoked(f.registry, cred));

  PresentationReport rep = verify_presentation(f.registry, p, f.verifier.did);
  CHECK_FALSE(rep.not_revoked);
  CHECK_FALSE(rep.valid());
  CHECK(rep.digests_ok);  // the disclosure itself is still consistent

  // A doctored copy cannot be revoked; the id no longer matches.
  Credential fake = cred;
  fake.holder_did = f.verifier.did;
  CHECK_THROWS_AS(revoke_credential(f.registry, f.issuer.wallet, "id", fake),
                  SsiError);
}

TEST_CASE("credentials and presentations survive the wire") {
  CredFixture f;
  IssueResult r = f.issue_hashed(kDegreeClaims);
  Presentation p =
      make_presentation(f.registry, f.holder.wallet, "id", r.credentials[0],
                        r.secrets, {"name"}, f.verifier.did);

  Credential c2 = Credential::from_json(r.credentials[0].to_json());
  CHECK(c2.signable_bytes() == r.credentials[0].signable_bytes());
  CHECK(c2.cred_id == r.credentials[0].cred_id);

  Presentation p2 = Presentation::from_json(Json::parse(p.to_json().dump()));
  PresentationReport rep = verify_presentation(f.registry, p2, f.verifier.did);
  CHECK(rep.valid());
  CHECK(rep.undisclosed == std::vector<std::string>{"degree", "dob"});
}

TEST_CASE("verification reports resolve problems instead of throwing") {
  CredFixture f;
  IssueResult r = f.issue_hashed(kDegreeClaims);
  Presentation p =
      make_presentation(f.registry, f.holder.wallet, "id", r.credentials[0],
                        r.secrets, {"degree"}, f.verifier.did);

  // Issuer revokes their own identifier; their past signatures stop
  // resolving.
  f.registry.revoke_did(f.issuer.wallet, "id", f.issuer.did);
  f.ledger.produce_block();

  PresentationReport rep = verify_presentation(f.registry, p, f.verifier.did);
  CHECK_FALSE(rep.issuer_sig_ok);
  CHECK_FALSE(rep.valid());
  REQUIRE(!rep.failures.empty());
  CHECK(rep.failures[0] == "issuer did cannot be resolved");
}
