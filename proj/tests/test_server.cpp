#include "doctest.h"
#include "httplib.h"
#include "ssi/errors.hpp"
#include "ssi/share_link_server.hpp"

using namespace ssi;

namespace {

// Registry with one presentation plus a running server and a client
// pointed at it.
struct ServerFixture {
  Rng rng{23};
  Ledger ledger;
  ContentStore store;
  DidRegistry registry{ledger, store};
  Wallet issuer{WalletKind::Hot};
  Wallet holder{WalletKind::Hot};
  std::string holder_did, verifier_did;
  Presentation presentation;
  LinkService links;
  ShareLinkServer server{links, registry, rng};
  int port = 0;

  ServerFixture() {
    Wallet verifier{WalletKind::Hot};
    std::string issuer_did;
    for (auto [wallet, did] : {std::pair{&issuer, &issuer_did},
                               {&holder, &holder_did},
                               {&verifier, &verifier_did}}) {
      MasterKey master = generate_master(rng.bytes(32));
      wallet->add_master("master", master);
      wallet->add_subkey("id", derive_subkey(master, "id"));
      *did = registry.register_did(*wallet, "id", {}, rng);
    }
    ledger.produce_block();  // height 1; the server's default `now`
    IssueResult r = issue(registry, issuer, "id", issuer_did, holder_did,
                          {{"degree", "MSc"}}, CredScheme::Hashed, rng);
    presentation = make_presentation(registry, holder, "id", r.credentials[0],
                                     r.secrets, {"degree"}, verifier_did);
    port = server.start("127.0.0.1");
  }

  httplib::Client client() { return httplib::Client("127.0.0.1", port); }

  std::string create_link(const Json& policy) {
    Json body{{"presentation", presentation.to_json()}, {"policy", policy}};
    httplib::Client cli = client();
    auto res = cli.Post("/links", body.dump(), "application/json");
    REQUIRE(res);
    REQUIRE(res->status == 201);
    Json reply = Json::parse(res->body);
    REQUIRE(reply.at("url") ==
            "/share/" + reply.at("token").get<std::string>());
    return reply.at("token").get<std::string>();
  }
};

}  // namespace

TEST_CASE("windowed link over HTTP: 200 inside, 410 at the boundary") {
  ServerFixture f;
  std::string token =
      f.create_link({{"type", "time_window"}, {"expires_at", 6}});
  httplib::Client cli = f.client();

  auto ok = cli.Get("/share/" + token + "?now=4");
  REQUIRE(ok);
  CHECK(ok->status == 200);
  Json body = Json::parse(ok->body);
  CHECK(body.at("credential").at("cred_id") ==
        to_hex(f.presentation.credential.cred_id));

  auto late = cli.Get("/share/" + token + "?now=6");
  REQUIRE(late);
  CHECK(late->status == 410);
  CHECK(Json::parse(late->body).at("error") == "Expired");

  // The earlier denial closed the link for good.
  auto retry = cli.Get("/share/" + token + "?now=4");
  REQUIRE(retry);
  CHECK(retry->status == 410);
}

TEST_CASE("one-off link over HTTP: second fetch is gone") {
  ServerFixture f;
  std::string token = f.create_link({{"type", "one_off"}});
  httplib::Client cli = f.client();

  auto first = cli.Get("/share/" + token);
  REQUIRE(first);
  CHECK(first->status == 200);

  auto second = cli.Get("/share/" + token);
  REQUIRE(second);
  CHECK(second->status == 410);
  CHECK(Json::parse(second->body).at("error") == "Consumed");
}

TEST_CASE("unknown tokens are 404") {
  ServerFixture f;
  httplib::Client cli = f.client();
  auto res = cli.Get("/share/does-not-exist");
  REQUIRE(res);
  CHECK(res->status == 404);
  CHECK(Json::parse(res->body).at("error") == "UnknownToken");
}

TEST_CASE("revocation endpoint checks the holder's signature") {
  ServerFixture f;
  std::string token =
      f.create_link({{"type", "time_window"}, {"expires_at", 100}});
  httplib::Client cli = f.client();

  Signature wrong = f.issuer.sign("id", link_revoke_bytes(token),
                                  SignPurpose::LinkControl);
  auto forbidden = cli.Delete("/links/" + token,
                              Json{{"signature", to_hex(wrong)}}.dump(),
                              "application/json");
  REQUIRE(forbidden);
  CHECK(forbidden->status == 403);

  auto malformed = cli.Delete("/links/" + token,
                              Json{{"signature", "abcd"}}.dump(),
                              "application/json");
  REQUIRE(malformed);
  CHECK(malformed->status == 400);

  Signature good = f.holder.sign("id", link_revoke_bytes(token),
                                 SignPurpose::LinkControl);
  auto revoked = cli.Delete("/links/" + token,
                            Json{{"signature", to_hex(good)}}.dump(),
                            "application/json");
  REQUIRE(revoked);
  CHECK(revoked->status == 200);
  CHECK(Json::parse(revoked->body).at("status") == "revoked");

  auto after = cli.Get("/share/" + token + "?now=5");
  REQUIRE(after);
  CHECK(after->status == 410);
  CHECK(Json::parse(after->body).at("error") == "Revoked");

  auto missing = cli.Delete("/links/nope",
                            Json{{"signature", to_hex(good)}}.dump(),
                            "application/json");
  REQUIRE(missing);
  CHECK(missing->status == 404);
}

TEST_CASE("bad creation requests are 400") {
  ServerFixture f;
  httplib::Client cli = f.client();

  auto not_json = cli.Post("/links", "presentation=yes", "application/json");
  REQUIRE(not_json);
  CHECK(not_json->status == 400);

  Json bad_policy{{"presentation", f.presentation.to_json()},
                  {"policy", {{"type", "forever"}}}};
  auto unknown = cli.Post("/links", bad_policy.dump(), "application/json");
  REQUIRE(unknown);
  CHECK(unknown->status == 400);

  // Ledger height is 1; an expiry at 1 is already over.
  Json dead{{"presentation", f.presentation.to_json()},
            {"policy", {{"type", "time_window"}, {"expires_at", 1}}}};
  auto born_dead = cli.Post("/links", dead.dump(), "application/json");
  REQUIRE(born_dead);
  CHECK(born_dead->status == 400);
  CHECK(Json::parse(born_dead->body).at("error") == "ExpiryInPast");
}

TEST_CASE("without ?now= the server reads the ledger clock") {
  ServerFixture f;
  std::string token =
      f.create_link({{"type", "time_window"}, {"expires_at", 3}});
  httplib::Client cli = f.client();

  CHECK(cli.Get("/share/" + token)->status == 200);  // height 1 < 3
  f.ledger.produce_block();
  f.ledger.produce_block();  // height 3: window closed
  CHECK(cli.Get("/share/" + token)->status == 410);
}
