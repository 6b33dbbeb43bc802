#include "doctest.h"
#include "ssi/bytes.hpp"
#include "ssi/crypto.hpp"
#include "ssi/errors.hpp"

using namespace ssi;

TEST_CASE("hex round trip and parse errors") {
  Bytes data{0x00, 0x7f, 0x80, 0xff};
  CHECK(to_hex(data) == "007f80ff");
  CHECK(from_hex("007F80FF") == data);  // case-insensitive
  CHECK_THROWS_AS(from_hex("abc"), SsiError);   // odd length
  CHECK_THROWS_AS(from_hex("zz"), SsiError);    // not hex
  CHECK_THROWS_AS(digest_from_hex("ab"), SsiError);  // wrong size
}

TEST_CASE("base32 of a 32-byte digest is 52 lowercase chars") {
  // Expected strings computed with an independent base32 encoder.
  Digest32 d = sha256(str_bytes("abc"));
  CHECK(to_base32(d) ==
        "xj4bnp4pahh6uqkbidpf3lrceoyagyndsylxvhfucd7wd4qacwwq");
  Digest32 e = sha256(Bytes{});
  CHECK(to_base32(e) ==
        "4oymiquy7qobjgx36tejs35zeqt24qpemsnzgtfeswmrw6csxbkq");
  CHECK(to_base32(d).size() == 52);
}

TEST_CASE("base64url uses - and _ and drops padding") {
  Bytes tok(16);
  for (size_t i = 0; i < tok.size(); ++i) tok[i] = uint8_t(i);
  CHECK(to_base64url(tok) == "AAECAwQFBgcICQoLDA0ODw");
  CHECK(to_base64url(Bytes{0xfb, 0xff}) == "-_8");
}

TEST_CASE("encoder frames every field with a u32 length") {
  Encoder enc;
  enc.add(std::string("ab"));
  enc.add(uint64_t{5});
  Bytes expect{0, 0, 0, 2, 'a', 'b', 0, 0, 0, 8, 0, 0, 0, 0, 0, 0, 0, 5};
  CHECK(enc.bytes() == expect);
}

TEST_CASE("length framing keeps concatenations apart") {
  // ("ab","c") and ("a","bc") must not encode to the same bytes.
  Encoder one;
  one.add(std::string("ab")).add(std::string("c"));
  Encoder two;
  two.add(std::string("a")).add(std::string("bc"));
  CHECK(one.bytes() != two.bytes());
}

TEST_CASE("u64 big-endian helpers") {
  auto b = u64_be(0x0102030405060708ull);
  CHECK(u64_from_be(b) == 0x0102030405060708ull);
  CHECK(b[0] == 1);
  CHECK(b[7] == 8);
}

TEST_CASE("rng is reproducible and its state survives a save") {
  Rng a(7);
  Rng b(7);
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a.bytes(33) == b.bytes(33));

  std::string mid = a.save_state();
  Bytes ahead = a.bytes(16);
  Rng c(999);  // unrelated seed, state fully replaced below
  c.restore_state(mid);
  CHECK(c.bytes(16) == ahead);
}
