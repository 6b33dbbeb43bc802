#pragma once

#include <map>
#include <optional>

#include "json.hpp"
#include "ssi/crypto.hpp"

namespace ssi {

using Json = nlohmann::json;

/// Content-addressed blob store standing in for off-ledger storage.
/// Reads re-hash the blob, so silent corruption is always caught.
class ContentStore {
 public:
  Digest32 put(Bytes content);
  Bytes get(const Digest32& address) const;
  bool contains(const Digest32& address) const;
  size_t size() const { return blobs_.size(); }

  /// Direct access, used by tests to corrupt blobs in place.
  std::map<std::string, Bytes>& blobs() { return blobs_; }

  Json to_json() const;
  static ContentStore from_json(const Json& j);

 private:
  std::map<std::string, Bytes> blobs_;  // hex address -> content
};

/// Simulated social platform: append-only posts under profile urls.
/// Post urls are deterministic (profile url + running counter).
class SocialStore {
 public:
  std::string post(const std::string& profile_url, const std::string& text);
  std::optional<std::string> get_post(const std::string& post_url) const;
  bool delete_post(const std::string& post_url);

  Json to_json() const;
  static SocialStore from_json(const Json& j);

 private:
  std::map<std::string, std::string> posts_;     // post url -> text
  std::map<std::string, uint64_t> post_counts_;  // profile url -> posts made
};

}  // namespace ssi
