#include "ssi/share_links.hpp"

#include "ssi/errors.hpp"

namespace ssi {

namespace {

// Keystream cipher keyed by the token. Symmetric, so sealing and
// unsealing are the same operation.
Bytes crypt(const std::string& token, std::span<const uint8_t> data) {
  Digest32 key = sha256(str_bytes("link-key:" + token));
  Bytes out(data.begin(), data.end());
  Digest32 block{};
  for (size_t i = 0; i < out.size(); ++i) {
    if (i % 32 == 0) {
      Bytes material(key.begin(), key.end());
      auto ctr = u64_be(i / 32);
      material.insert(material.end(), ctr.begin(), ctr.end());
      block = sha256(material);
    }
    out[i] ^= block[i % 32];
  }
  return out;
}

}  // namespace

const char* link_state_name(LinkState s) {
  switch (s) {
    case LinkState::Active: return "Active";
    case LinkState::Expired: return "Expired";
    case LinkState::Consumed: return "Consumed";
    case LinkState::Revoked: return "Revoked";
  }
  return "Unknown";
}

const char* access_outcome_name(AccessOutcome o) {
  switch (o) {
    case AccessOutcome::Success: return "Success";
    case AccessOutcome::UnknownToken: return "UnknownToken";
    case AccessOutcome::Expired: return "Expired";
    case AccessOutcome::Consumed: return "Consumed";
    case AccessOutcome::Revoked: return "Revoked";
  }
  return "Unknown";
}

Bytes link_revoke_bytes(const std::string& token) {
  Encoder enc;
  enc.add(std::string("revoke-link")).add(token);
  return enc.take();
}

ShareLink LinkService::view(const std::string& token, const Entry& e) const {
  return {token, e.policy, e.state, e.created_at, e.holder_did};
}

ShareLink LinkService::create(const Presentation& presentation,
                              const LinkPolicy& policy, Height now, Rng& rng) {
  if (const auto* tw = std::get_if<TimeWindowPolicy>(&policy)) {
    if (tw->expires_at <= now) {
      fail(Errc::ExpiryInPast, "expiry " + std::to_string(tw->expires_at) +
                                   " is not after now " + std::to_string(now));
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  std::string token;
  do {
    token = to_base64url(rng.bytes(16));
  } while (links_.count(token));

  Entry e;
  e.policy = policy;
  e.created_at = now;
  e.holder_did = presentation.credential.holder_did;
  e.sealed = crypt(token, str_bytes(presentation.to_json().dump()));
  e.has_content = true;
  links_[token] = std::move(e);
  return view(token, links_[token]);
}

Presentation LinkService::access(const std::string& token, Height now) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = links_.find(token);
  if (it == links_.end()) {
    log_.push_back({token, now, AccessOutcome::UnknownToken});
    fail(Errc::UnknownToken, "no link for this token");
  }
  Entry& e = it->second;

  switch (e.state) {
    case LinkState::Revoked:
      log_.push_back({token, now, AccessOutcome::Revoked});
      fail(Errc::Revoked, "link was revoked by its holder");
    case LinkState::Consumed:
      log_.push_back({token, now, AccessOutcome::Consumed});
      fail(Errc::Consumed, "one-off link was already used");
    case LinkState::Expired:
      log_.push_back({token, now, AccessOutcome::Expired});
      fail(Errc::Expired, "link window has closed");
    case LinkState::Active:
      break;
  }

  if (const auto* tw = std::get_if<TimeWindowPolicy>(&e.policy)) {
    // Outside the window the link dies, in both directions: denials
    // are monotone, a denied token never serves content later.
    if (now < e.created_at || now >= tw->expires_at) {
      e.state = LinkState::Expired;
      log_.push_back({token, now, AccessOutcome::Expired});
      fail(Errc::Expired, "now " + std::to_string(now) +
                              " is outside [" + std::to_string(e.created_at) +
                              ", " + std::to_string(tw->expires_at) + ")");
    }
  } else {
    // One-off: consume first, then serve. The state flip under the
    // lock is the whole exactly-once argument.
    e.state = LinkState::Consumed;
  }

  Bytes plain = crypt(token, e.sealed);
  log_.push_back({token, now, AccessOutcome::Success});
  return Presentation::from_json(Json::parse(plain.begin(), plain.end()));
}

void LinkService::revoke(const std::string& token, const Signature& sig,
                         const DidRegistry& registry) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = links_.find(token);
  if (it == links_.end()) fail(Errc::UnknownToken, "no link for this token");
  Entry& e = it->second;
  const DidRecord* holder = registry.find_record(e.holder_did);
  if (!holder ||
      !ed25519_verify(holder->controller, link_revoke_bytes(token), sig)) {
    fail(Errc::NotHolder, "revocation is not signed by the link's holder");
  }
  // Idempotent; revoking a consumed or expired link is a no-op that
  // still pins the state to Revoked only from Active.
  if (e.state == LinkState::Active) e.state = LinkState::Revoked;
}

size_t LinkService::purge_expired(Height now) {
  std::lock_guard<std::mutex> lock(mu_);
  size_t wiped = 0;
  for (auto& [token, e] : links_) {
    if (e.state == LinkState::Active) {
      if (const auto* tw = std::get_if<TimeWindowPolicy>(&e.policy)) {
        if (now >= tw->expires_at) e.state = LinkState::Expired;
      }
    }
    if (e.state != LinkState::Active && e.has_content) {
      e.sealed.clear();
      e.has_content = false;
      ++wiped;
    }
  }
  return wiped;
}

std::optional<ShareLink> LinkService::info(const std::string& token) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = links_.find(token);
  if (it == links_.end()) return std::nullopt;
  return view(token, it->second);
}

std::vector<AccessLogEntry> LinkService::log() const {
  std::lock_guard<std::mutex> lock(mu_);
  return log_;
}

size_t LinkService::success_count(const std::string& token) const {
  std::lock_guard<std::mutex> lock(mu_);
  size_t n = 0;
  for (const AccessLogEntry& e : log_) {
    if (e.token == token && e.outcome == AccessOutcome::Success) ++n;
  }
  return n;
}

Json LinkService::to_json() const {
  std::lock_guard<std::mutex> lock(mu_);
  Json links = Json::object();
  for (const auto& [token, e] : links_) {
    Json policy;
    if (const auto* tw = std::get_if<TimeWindowPolicy>(&e.policy)) {
      policy = {{"expires_at", tw->expires_at}, {"type", "time_window"}};
    } else {
      policy = {{"type", "one_off"}};
    }
    links[token] = {{"created_at", e.created_at},
                    {"has_content", e.has_content},
                    {"holder_did", e.holder_did},
                    {"policy", policy},
                    {"sealed", to_hex(e.sealed)},
                    {"state", link_state_name(e.state)}};
  }
  Json log = Json::array();
  for (const AccessLogEntry& e : log_) {
    log.push_back({{"at", e.at},
                   {"outcome", access_outcome_name(e.outcome)},
                   {"token", e.token}});
  }
  return Json{{"links", links}, {"log", log}};
}

void LinkService::load(const Json& j) {
  std::lock_guard<std::mutex> lock(mu_);
  links_.clear();
  log_.clear();
  for (const auto& [token, lj] : j.at("links").items()) {
    Entry e;
    const Json& policy = lj.at("policy");
    if (policy.at("type") == "time_window") {
      e.policy = TimeWindowPolicy{policy.at("expires_at").get<Height>()};
    } else {
      e.policy = OneOffPolicy{};
    }
    std::string state = lj.at("state").get<std::string>();
    bool known = false;
    for (LinkState s : {LinkState::Active, LinkState::Expired,
                        LinkState::Consumed, LinkState::Revoked}) {
      if (state == link_state_name(s)) {
        e.state = s;
        known = true;
      }
    }
    if (!known) fail(Errc::ParseError, "unknown link state '" + state + "'");
    e.created_at = lj.at("created_at").get<Height>();
    e.holder_did = lj.at("holder_did").get<std::string>();
    e.sealed = from_hex(lj.at("sealed").get<std::string>());
    e.has_content = lj.at("has_content").get<bool>();
    links_[token] = std::move(e);
  }
  for (const Json& le : j.at("log")) {
    AccessLogEntry entry;
    entry.token = le.at("token").get<std::string>();
    entry.at = le.at("at").get<Height>();
    std::string outcome = le.at("outcome").get<std::string>();
    bool known = false;
    for (AccessOutcome o :
         {AccessOutcome::Success, AccessOutcome::UnknownToken,
          AccessOutcome::Expired, AccessOutcome::Consumed,
          AccessOutcome::Revoked}) {
      if (outcome == access_outcome_name(o)) {
        entry.outcome = o;
        known = true;
      }
    }
    if (!known) fail(Errc::ParseError, "unknown outcome '" + outcome + "'");
    log_.push_back(std::move(entry));
  }
}

}  // namespace ssi
