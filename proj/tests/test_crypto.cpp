#include "doctest.h"
#include "ssi/crypto.hpp"
#include "ssi/errors.hpp"

using namespace ssi;

TEST_CASE("sha256 matches the published test vector") {
  CHECK(to_hex(sha256(str_bytes("abc"))) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(to_hex(sha256(Bytes{})) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("ed25519 matches RFC 8032 test vector 1") {
  Bytes seed = from_hex(
      "9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60");
  KeyPair kp = keypair_from_seed(seed);
  CHECK(to_hex(kp.pub) ==
        "d75a980182b10ab7d54bfed3c964073a0ee172f3daa62325af021a68f707511a");

  Signature sig = ed25519_sign(kp.seed, Bytes{});
  CHECK(to_hex(sig) ==
        "e5564300c360ac729086e2cc806e828a84877f1eb8e5d974d873e065224901555fb882"
        "1590a33bacc61e39701cf9b46bd25bf5f0595bbe24655141438e7a100b");
  CHECK(ed25519_verify(kp.pub, Bytes{}, sig));
}

TEST_CASE("a flipped bit anywhere breaks verification") {
  Rng rng(3);
  KeyPair kp = keypair_from_seed(rng.bytes(32));
  Bytes msg = str_bytes("payload");
  Signature sig = ed25519_sign(kp.seed, msg);
  REQUIRE(ed25519_verify(kp.pub, msg, sig));

  Signature bad_sig = sig;
  bad_sig[13] ^= 0x01;
  CHECK_FALSE(ed25519_verify(kp.pub, msg, bad_sig));

  Bytes bad_msg = msg;
  bad_msg[0] ^= 0x80;
  CHECK_FALSE(ed25519_verify(kp.pub, bad_msg, sig));

  PublicKey bad_pub = kp.pub;
  bad_pub[31] ^= 0x40;
  CHECK_FALSE(ed25519_verify(bad_pub, msg, sig));
}

TEST_CASE("seeds must be exactly 32 bytes") {
  CHECK_THROWS_WITH_AS(keypair_from_seed(Bytes(31)),
                       doctest::Contains("32"), SsiError);
  CHECK_THROWS_AS(keypair_from_seed(Bytes(33)), SsiError);
}
