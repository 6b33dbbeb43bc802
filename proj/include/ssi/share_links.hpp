#pragma once

#include <mutex>
#include <variant>

#include "ssi/credentials.hpp"

namespace ssi {

/// Readable while created_at <= now < expires_at (heights).
struct TimeWindowPolicy {
  Height expires_at = 0;
};

/// Readable exactly once, ever, no matter how many callers race.
struct OneOffPolicy {};

using LinkPolicy = std::variant<TimeWindowPolicy, OneOffPolicy>;

enum class LinkState { Active, Expired, Consumed, Revoked };
const char* link_state_name(LinkState s);

struct ShareLink {
  std::string token;
  LinkPolicy policy;
  LinkState state = LinkState::Active;
  Height created_at = 0;
  std::string holder_did;
};

enum class AccessOutcome { Success, UnknownToken, Expired, Consumed, Revoked };
const char* access_outcome_name(AccessOutcome o);

struct AccessLogEntry {
  std::string token;
  Height at = 0;
  AccessOutcome outcome = AccessOutcome::Success;
};

Bytes link_revoke_bytes(const std::string& token);

/// Capability-token sharing of presentations. The service never hands
/// out content for a token it cannot justify: the truth table is
/// "content iff the link is Active and inside its window", and every
/// access lands in the log. Presentations are encrypted at rest under
/// a token-derived key, so a dump of the service's storage without the
/// tokens is just noise.
///
/// Thread safe; one-off consumption is decided under the lock, so two
/// racing readers can never both win.
class LinkService {
 public:
  ShareLink create(const Presentation& presentation, const LinkPolicy& policy,
                   Height now, Rng& rng);

  Presentation access(const std::string& token, Height now);

  /// Holder-signed revocation. sig covers link_revoke_bytes(token).
  void revoke(const std::string& token, const Signature& sig,
              const DidRegistry& registry);

  /// Drop the sealed content of every link that can no longer be
  /// served. Returns how many links were wiped.
  size_t purge_expired(Height now);

  std::optional<ShareLink> info(const std::string& token) const;
  std::vector<AccessLogEntry> log() const;
  size_t success_count(const std::string& token) const;

  Json to_json() const;
  void load(const Json& j);  // replaces current contents

 private:
  struct Entry {
    LinkPolicy policy;
    LinkState state = LinkState::Active;
    Height created_at = 0;
    std::string holder_did;
    Bytes sealed;  // encrypted presentation JSON, wiped on purge
    bool has_content = false;
  };

  ShareLink view(const std::string& token, const Entry& e) const;

  mutable std::mutex mu_;
  std::map<std::string, Entry> links_;
  std::vector<AccessLogEntry> log_;
};

}  // namespace ssi
