#include "ssi/did.hpp"

#include "ssi/errors.hpp"

namespace ssi {

namespace {
constexpr const char* kPrefix = "did:sim:";
constexpr size_t kIdChars = 52;  // base32 of 32 bytes
}  // namespace

std::string make_did(const PublicKey& controller,
                     std::span<const uint8_t> salt) {
  Bytes material(controller.begin(), controller.end());
  material.insert(material.end(), salt.begin(), salt.end());
  return kPrefix + to_base32(sha256(material));
}

bool is_valid_did(const std::string& did) {
  const std::string prefix = kPrefix;
  if (did.size() != prefix.size() + kIdChars) return false;
  if (did.compare(0, prefix.size(), prefix) != 0) return false;
  for (size_t i = prefix.size(); i < did.size(); ++i) {
    char c = did[i];
    bool ok = (c >= 'a' && c <= 'z') || (c >= '2' && c <= '7');
    if (!ok) return false;
  }
  return true;
}

Bytes social_binding_bytes(const std::string& did,
                           const std::string& profile_url,
                           const std::string& post_url) {
  Encoder enc;
  enc.add(std::string("social-binding")).add(did).add(profile_url).add(post_url);
  return enc.take();
}

Json DidDocument::to_json() const {
  Json j;
  j["@context"] = context;
  j["id"] = id;
  j["publicKey"] = to_hex(public_key);
  Json svc = Json::array();
  for (const ServiceEndpoint& s : service) {
    svc.push_back({{"endpoint", s.endpoint}, {"name", s.name}});
  }
  j["service"] = svc;
  if (social) {
    j["social"] = {
        {"attribute_signature", to_hex(social->attribute_signature)},
        {"post_url", social->post_url},
        {"profile_url", social->profile_url},
    };
  }
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

DidDocument DidDocument::from_json(const Json& j) {
  DidDocument d;
  d.context = j.at("@context").get<std::string>();
  d.id = j.at("id").get<std::string>();
  Bytes pub = from_hex(j.at("publicKey").get<std::string>());
  if (pub.size() != d.public_key.size()) {
    fail(Errc::ParseError, "publicKey must be 32 bytes");
  }
  std::copy(pub.begin(), pub.end(), d.public_key.begin());
  for (const Json& s : j.at("service")) {
    d.service.push_back({s.at("name").get<std::string>(),
                         s.at("endpoint").get<std::string>()});
  }
  if (j.contains("social")) {
    SocialBinding b;
    b.profile_url = j["social"].at("profile_url").get<std::string>();
    b.post_url = j["social"].at("post_url").get<std::string>();
    Bytes sig =
        from_hex(j["social"].at("attribute_signature").get<std::string>());
    if (sig.size() != b.attribute_signature.size()) {
      fail(Errc::ParseError, "attribute_signature must be 64 bytes");
    }
    std::copy(sig.begin(), sig.end(), b.attribute_signature.begin());
    d.social = b;
  }
  if (j.contains("extra")) d.extra = j["extra"];
  return d;
}

Bytes DidDocument::canonical_bytes() const {
  // replace, not strict: addressing must work for any byte content.
  return str_bytes(to_json().dump(-1, ' ', false, Json::error_handler_t::replace));
}

Digest32 DidDocument::address() const { return sha256(canonical_bytes()); }

}  // namespace ssi
