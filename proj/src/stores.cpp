#include "ssi/stores.hpp"

#include "ssi/errors.hpp"

namespace ssi {

Digest32 ContentStore::put(Bytes content) {
  Digest32 addr = sha256(content);
  blobs_[to_hex(addr)] = std::move(content);
  return addr;
}

Bytes ContentStore::get(const Digest32& address) const {
  auto it = blobs_.find(to_hex(address));
  if (it == blobs_.end()) {
    fail(Errc::NotFound, "no content at " + to_hex(address));
  }
  if (sha256(it->second) != address) {
    fail(Errc::IntegrityViolation,
         "content at " + to_hex(address) + " does not match its address");
  }
  return it->second;
}

bool ContentStore::contains(const Digest32& address) const {
  return blobs_.count(to_hex(address)) > 0;
}

Json ContentStore::to_json() const {
  Json blobs = Json::object();
  for (const auto& [addr, content] : blobs_) blobs[addr] = to_hex(content);
  return Json{{"blobs", blobs}};
}

ContentStore ContentStore::from_json(const Json& j) {
  ContentStore store;
  for (const auto& [addr, content] : j.at("blobs").items()) {
    store.blobs_[addr] = from_hex(content.get<std::string>());
  }
  return store;
}

std::string SocialStore::post(const std::string& profile_url,
                              const std::string& text) {
  uint64_t n = ++post_counts_[profile_url];
  std::string post_url = profile_url + "/post/" + std::to_string(n);
  posts_[post_url] = text;
  return post_url;
}

std::optional<std::string> SocialStore::get_post(
    const std::string& post_url) const {
  auto it = posts_.find(post_url);
  if (it == posts_.end()) return std::nullopt;
  return it->second;
}

bool SocialStore::delete_post(const std::string& post_url) {
  return posts_.erase(post_url) > 0;
}

Json SocialStore::to_json() const {
  Json j;
  j["post_counts"] = post_counts_;
  j["posts"] = posts_;
  return j;
}

SocialStore SocialStore::from_json(const Json& j) {
  SocialStore store;
  store.posts_ = j.at("posts").get<std::map<std::string, std::string>>();
  store.post_counts_ =
      j.at("post_counts").get<std::map<std::string, uint64_t>>();
  return store;
}

}  // namespace ssi
