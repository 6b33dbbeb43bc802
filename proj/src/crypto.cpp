#include "ssi/crypto.hpp"

#include <openssl/evp.h>

#include <memory>

#include "ssi/errors.hpp"

namespace ssi {

namespace {

struct PkeyDeleter {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct CtxDeleter {
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};

using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using CtxPtr = std::unique_ptr<EVP_MD_CTX, CtxDeleter>;

PkeyPtr private_key(const Seed32& seed) {
  PkeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                           seed.data(), seed.size()));
  if (!key) throw std::runtime_error("ed25519 private key import failed");
  return key;
}

}  // namespace

Digest32 sha256(std::span<const uint8_t> data) {
  Digest32 out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != out.size()) {
    throw std::runtime_error("sha256 failed");
  }
  return out;
}

KeyPair keypair_from_seed(std::span<const uint8_t> seed) {
  if (seed.size() != 32) fail(Errc::BadSeedLength, "seed must be 32 bytes");
  KeyPair kp;
  std::copy(seed.begin(), seed.end(), kp.seed.begin());
  PkeyPtr key = private_key(kp.seed);
  size_t publen = kp.pub.size();
  if (EVP_PKEY_get_raw_public_key(key.get(), kp.pub.data(), &publen) != 1 ||
      publen != kp.pub.size()) {
    throw std::runtime_error("ed25519 public key extraction failed");
  }
  return kp;
}

Signature ed25519_sign(const Seed32& seed, std::span<const uint8_t> message) {
  PkeyPtr key = private_key(seed);
  CtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx ||
      EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1) {
    throw std::runtime_error("ed25519 sign init failed");
  }
  Signature sig{};
  size_t siglen = sig.size();
  if (EVP_DigestSign(ctx.get(), sig.data(), &siglen, message.data(),
                     message.size()) != 1 ||
      siglen != sig.size()) {
    throw std::runtime_error("ed25519 sign failed");
  }
  return sig;
}

bool ed25519_verify(const PublicKey& pub, std::span<const uint8_t> message,
                    const Signature& sig) {
  PkeyPtr key(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, pub.data(),
                                          pub.size()));
  if (!key) return false;
  CtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx ||
      EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) !=
          1) {
    return false;
  }
  return EVP_DigestVerify(ctx.get(), sig.data(), sig.size(), message.data(),
                          message.size()) == 1;
}

}  // namespace ssi
