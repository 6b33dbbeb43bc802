#include "doctest.h"
#include "ssi/errors.hpp"
#include "ssi/stores.hpp"

using namespace ssi;

TEST_CASE("content store addresses by digest and verifies on read") {
  ContentStore store;
  Bytes doc = str_bytes("{\"id\":\"x\"}");
  Digest32 addr = store.put(doc);
  CHECK(addr == sha256(doc));
  CHECK(store.get(addr) == doc);
  CHECK(store.contains(addr));

  // Same content, same address, no growth.
  CHECK(store.put(doc) == addr);
  CHECK(store.size() == 1);

  CHECK_THROWS_AS(store.get(Digest32{}), SsiError);
}

TEST_CASE("a corrupted blob can never be read back quietly") {
  ContentStore store;
  Digest32 addr = store.put(str_bytes("original"));
  store.blobs()[to_hex(addr)][0] ^= 0x01;
  CHECK_THROWS_WITH_AS(store.get(addr),
                       doctest::Contains("does not match its address"),
                       SsiError);
}

TEST_CASE("social posts get deterministic urls per profile") {
  SocialStore social;
  std::string p1 = social.post("https://s.example/alice", "hello");
  std::string p2 = social.post("https://s.example/alice", "again");
  std::string q1 = social.post("https://s.example/bob", "hi");
  CHECK(p1 != p2);
  CHECK(p1.rfind("https://s.example/alice", 0) == 0);
  CHECK(q1.rfind("https://s.example/bob", 0) == 0);
  CHECK(social.get_post(p1) == "hello");
  CHECK(social.get_post(p2) == "again");

  CHECK(social.delete_post(p1));
  CHECK_FALSE(social.get_post(p1).has_value());
  CHECK_FALSE(social.delete_post(p1));  // already gone

  // Counter does not reset after deletion; urls never repeat.
  std::string p3 = social.post("https://s.example/alice", "third");
  CHECK(p3 != p1);
  CHECK(p3 != p2);
}
