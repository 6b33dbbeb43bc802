#include "ssi/credentials.hpp"

#include <algorithm>
#include <charconv>

#include "ssi/errors.hpp"

namespace ssi {

namespace {

constexpr uint8_t kSep = 0x1f;

const DidRecord* usable_record(const DidRegistry& registry,
                               const std::string& did) {
  const DidRecord* rec = registry.find_record(did);
  if (!rec || rec->state == DidState::Revoked) return nullptr;
  return rec;
}

void check_claims(const std::vector<Claim>& claims) {
  if (claims.empty()) fail(Errc::EmptyClaims, "no claims to issue");
  std::set<std::string> names;
  for (const Claim& c : claims) {
    if (c.name.empty()) fail(Errc::EmptyClaims, "claim with empty name");
    if (!names.insert(c.name).second) {
      fail(Errc::DuplicateClaim, "claim '" + c.name + "' appears twice");
    }
  }
}

Json claims_json(const std::vector<Claim>& claims) {
  Json arr = Json::array();
  for (const Claim& c : claims) {
    arr.push_back({{"name", c.name}, {"value", c.value}});
  }
  return arr;
}

Json attributes_json(const std::vector<SaltedAttribute>& attrs) {
  Json arr = Json::array();
  for (const SaltedAttribute& a : attrs) {
    arr.push_back({{"digest", to_hex(a.digest)}, {"name", a.name}});
  }
  return arr;
}

Credential sign_credential(Credential cred, Wallet& wallet,
                           const std::string& key) {
  cred.cred_id = sha256(cred.signable_bytes());
  cred.issuer_signature =
      wallet.sign(key, cred.signable_bytes(), SignPurpose::Credential);
  return cred;
}

struct ParsedPredicate {
  std::string name;
  std::string op;
  int64_t bound = 0;
};

ParsedPredicate parse_predicate(const std::string& predicate) {
  for (const char* op : {">=", "<=", "=="}) {
    size_t pos = predicate.find(op);
    if (pos == std::string::npos || pos == 0) continue;
    std::string name = predicate.substr(0, pos);
    std::string rhs = predicate.substr(pos + 2);
    int64_t bound = 0;
    auto [ptr, ec] =
        std::from_chars(rhs.data(), rhs.data() + rhs.size(), bound);
    if (ec != std::errc() || ptr != rhs.data() + rhs.size()) {
      fail(Errc::UnsupportedPredicate, "bound '" + rhs + "' is not an integer");
    }
    return {name, op, bound};
  }
  fail(Errc::UnsupportedPredicate,
       "predicate must look like <name><op><integer> with op in {>=, <=, ==}");
}

}  // namespace

const char* cred_scheme_name(CredScheme s) {
  switch (s) {
    case CredScheme::Plain: return "plain";
    case CredScheme::Atomic: return "atomic";
    case CredScheme::Hashed: return "hashed";
    case CredScheme::Predicate: return "predicate";
  }
  return "unknown";
}

CredScheme cred_scheme_from_name(const std::string& name) {
  for (CredScheme s : {CredScheme::Plain, CredScheme::Atomic,
                       CredScheme::Hashed, CredScheme::Predicate}) {
    if (name == cred_scheme_name(s)) return s;
  }
  fail(Errc::ParseError, "unknown credential scheme '" + name + "'");
}

Digest32 salted_attribute_digest(const std::string& name,
                                 const std::string& value,
                                 std::span<const uint8_t> nonce) {
  Bytes material = str_bytes(name);
  material.push_back(kSep);
  Bytes v = str_bytes(value);
  material.insert(material.end(), v.begin(), v.end());
  material.push_back(kSep);
  material.insert(material.end(), nonce.begin(), nonce.end());
  return sha256(material);
}

Bytes Credential::signable_bytes() const {
  Json body = scheme == CredScheme::Hashed ? attributes_json(attributes)
                                           : claims_json(claims);
  Encoder enc;
  enc.add(issuer_did).add(holder_did);
  enc.add(std::string(cred_scheme_name(scheme)));
  enc.add(issued_at);
  // replace, not strict: these strings can arrive off the wire, and a
  // commitment over them has to be computable for any byte content.
  enc.add(body.dump(-1, ' ', false, Json::error_handler_t::replace));
  return enc.take();
}

Json Credential::to_json() const {
  Json j;
  if (scheme == CredScheme::Hashed) {
    j["attributes"] = attributes_json(attributes);
  } else {
    j["claims"] = claims_json(claims);
  }
  j["cred_id"] = to_hex(cred_id);
  j["holder_did"] = holder_did;
  j["issued_at"] = issued_at;
  j["issuer_did"] = issuer_did;
  j["issuer_signature"] = to_hex(issuer_signature);
  j["scheme"] = cred_scheme_name(scheme);
  return j;
}

Credential Credential::from_json(const Json& j) {
  Credential c;
  c.scheme = cred_scheme_from_name(j.at("scheme").get<std::string>());
  if (c.scheme == CredScheme::Hashed) {
    for (const Json& a : j.at("attributes")) {
      c.attributes.push_back(
          {a.at("name").get<std::string>(),
           digest_from_hex(a.at("digest").get<std::string>())});
    }
  } else {
    for (const Json& cl : j.at("claims")) {
      c.claims.push_back(
          {cl.at("name").get<std::string>(), cl.at("value").get<std::string>()});
    }
  }
  c.cred_id = digest_from_hex(j.at("cred_id").get<std::string>());
  c.holder_did = j.at("holder_did").get<std::string>();
  c.issued_at = j.at("issued_at").get<Height>();
  c.issuer_did = j.at("issuer_did").get<std::string>();
  Bytes sig = from_hex(j.at("issuer_signature").get<std::string>());
  if (sig.size() != c.issuer_signature.size()) {
    fail(Errc::ParseError, "issuer_signature must be 64 bytes");
  }
  std::copy(sig.begin(), sig.end(), c.issuer_signature.begin());
  return c;
}

IssueResult issue(DidRegistry& registry, Wallet& wallet,
                  const std::string& key, const std::string& issuer_did,
                  const std::string& holder_did,
                  const std::vector<Claim>& claims, CredScheme scheme,
                  Rng& rng) {
  if (scheme == CredScheme::Predicate) {
    fail(Errc::WrongScheme, "predicate credentials go through issue_predicate");
  }
  check_claims(claims);
  const DidRecord* issuer = usable_record(registry, issuer_did);
  if (!issuer) fail(Errc::UnknownIssuer, issuer_did + " is not registered");
  if (issuer->controller != wallet.pub(key)) {
    fail(Errc::NotIssuer, "key '" + key + "' does not control " + issuer_did);
  }

  Credential base;
  base.issuer_did = issuer_did;
  base.holder_did = holder_did;
  base.scheme = scheme;
  base.issued_at = registry.ledger().height();

  IssueResult result;
  switch (scheme) {
    case CredScheme::Plain: {
      base.claims = claims;
      result.credentials.push_back(sign_credential(base, wallet, key));
      break;
    }
    case CredScheme::Atomic: {
      // One credential per claim, so each can travel alone.
      for (const Claim& c : claims) {
        Credential cred = base;
        cred.claims = {c};
        result.credentials.push_back(sign_credential(cred, wallet, key));
      }
      break;
    }
    case CredScheme::Hashed: {
      // Each value is hashed with its own nonce; equal values in
      // different credentials leave unrelated digests behind.
      for (const Claim& c : claims) {
        Bytes nonce = rng.bytes(16);
        base.attributes.push_back(
            {c.name, salted_attribute_digest(c.name, c.value, nonce)});
        result.secrets[c.name] = {c.value, std::move(nonce)};
      }
      result.credentials.push_back(sign_credential(base, wallet, key));
      break;
    }
    case CredScheme::Predicate:
      break;  // unreachable, rejected above
  }
  return result;
}

Credential issue_predicate(DidRegistry& registry, Wallet& wallet,
                           const std::string& key,
                           const std::string& issuer_did,
                           const std::string& holder_did, const Claim& source,
                           const std::string& predicate) {
  ParsedPredicate parsed = parse_predicate(predicate);
  if (parsed.name != source.name) {
    fail(Errc::UnsupportedPredicate, "predicate is over '" + parsed.name +
                                         "' but the source claim is '" +
                                         source.name + "'");
  }
  int64_t value = 0;
  auto [ptr, ec] = std::from_chars(
      source.value.data(), source.value.data() + source.value.size(), value);
  if (ec != std::errc() || ptr != source.value.data() + source.value.size()) {
    fail(Errc::UnsupportedPredicate,
         "source value '" + source.value + "' is not an integer");
  }
  bool holds = parsed.op == ">=" ? value >= parsed.bound
               : parsed.op == "<=" ? value <= parsed.bound
                                   : value == parsed.bound;
  if (!holds) {
    fail(Errc::PredicateFalse, "'" + predicate + "' does not hold");
  }

  const DidRecord* issuer = usable_record(registry, issuer_did);
  if (!issuer) fail(Errc::UnknownIssuer, issuer_did + " is not registered");
  if (issuer->controller != wallet.pub(key)) {
    fail(Errc::NotIssuer, "key '" + key + "' does not control " + issuer_did);
  }

  Credential cred;
  cred.issuer_did = issuer_did;
  cred.holder_did = holder_did;
  cred.scheme = CredScheme::Predicate;
  // Only the predicate itself is attested; the source value stays
  // with the issuer.
  cred.claims = {{predicate, "true"}};
  cred.issued_at = registry.ledger().height();
  return sign_credential(cred, wallet, key);
}

Bytes Presentation::signable_bytes() const {
  Json disclosed_json = Json::array();
  for (const DisclosedAttribute& d : disclosed) {
    disclosed_json.push_back(
        {{"name", d.name}, {"nonce", to_hex(d.nonce)}, {"value", d.value}});
  }
  Encoder enc;
  enc.add(std::span<const uint8_t>(credential.cred_id));
  enc.add(disclosed_json.dump(-1, ' ', false, Json::error_handler_t::replace));
  enc.add(audience);
  return enc.take();
}

Json Presentation::to_json() const {
  Json disclosed_json = Json::array();
  for (const DisclosedAttribute& d : disclosed) {
    disclosed_json.push_back(
        {{"name", d.name}, {"nonce", to_hex(d.nonce)}, {"value", d.value}});
  }
  Json j;
  j["audience"] = audience;
  j["credential"] = credential.to_json();
  j["disclosed"] = disclosed_json;
  j["holder_signature"] = to_hex(holder_signature);
  return j;
}

Presentation Presentation::from_json(const Json& j) {
  Presentation p;
  p.audience = j.at("audience").get<std::string>();
  p.credential = Credential::from_json(j.at("credential"));
  for (const Json& d : j.at("disclosed")) {
    p.disclosed.push_back({d.at("name").get<std::string>(),
                           d.at("value").get<std::string>(),
                           from_hex(d.at("nonce").get<std::string>())});
  }
  Bytes sig = from_hex(j.at("holder_signature").get<std::string>());
  if (sig.size() != p.holder_signature.size()) {
    fail(Errc::ParseError, "holder_signature must be 64 bytes");
  }
  std::copy(sig.begin(), sig.end(), p.holder_signature.begin());
  return p;
}

Presentation make_presentation(
    DidRegistry& registry, Wallet& wallet, const std::string& key,
    const Credential& credential,
    const std::map<std::string, DisclosureSecret>& secrets,
    const std::set<std::string>& disclose, const std::string& audience) {
  if (credential.scheme != CredScheme::Hashed) {
    fail(Errc::WrongScheme, "presentations disclose hashed credentials");
  }
  const DidRecord* holder = usable_record(registry, credential.holder_did);
  if (!holder) {
    fail(Errc::UnknownDid, credential.holder_did + " is not registered");
  }
  if (holder->controller != wallet.pub(key)) {
    fail(Errc::NotHolder,
         "key '" + key + "' does not control " + credential.holder_did);
  }

  Presentation p;
  p.credential = credential;
  p.audience = audience;
  // Disclosed entries keep the credential's attribute order.
  std::set<std::string> remaining = disclose;
  for (const SaltedAttribute& a : credential.attributes) {
    if (!remaining.erase(a.name)) continue;
    auto it = secrets.find(a.name);
    if (it == secrets.end()) {
      fail(Errc::UnknownAttribute, "no disclosure secret for '" + a.name + "'");
    }
    p.disclosed.push_back({a.name, it->second.value, it->second.nonce});
  }
  if (!remaining.empty()) {
    fail(Errc::UnknownAttribute,
         "credential has no attribute '" + *remaining.begin() + "'");
  }
  p.holder_signature =
      wallet.sign(key, p.signable_bytes(), SignPurpose::Presentation);
  return p;
}

namespace {

// Issuer and revocation checks shared by both verification paths.
void check_issuer_side(const DidRegistry& registry, const Credential& cred,
                       PresentationReport& report) {
  report.cred_id_ok = cred.cred_id == sha256(cred.signable_bytes());
  if (!report.cred_id_ok) {
    report.failures.push_back("credential id does not match its content");
  }

  const DidRecord* issuer = usable_record(registry, cred.issuer_did);
  if (!issuer) {
    report.failures.push_back("issuer did cannot be resolved");
  } else {
    report.issuer_sig_ok = ed25519_verify(
        issuer->controller, cred.signable_bytes(), cred.issuer_signature);
    if (!report.issuer_sig_ok) {
      report.failures.push_back("issuer signature does not verify");
    }
  }

  report.not_revoked =
      !registry.ledger().state().revocations.count(to_hex(cred.cred_id));
  if (!report.not_revoked) report.failures.push_back("credential is revoked");
}

}  // namespace

PresentationReport verify_presentation(const DidRegistry& registry,
                                       const Presentation& presentation,
                                       const std::string& audience) {
  PresentationReport report;
  const Credential& cred = presentation.credential;

  report.scheme_ok = cred.scheme == CredScheme::Hashed;
  if (!report.scheme_ok) {
    report.failures.push_back("presentation is not over a hashed credential");
    return report;
  }

  check_issuer_side(registry, cred, report);

  const DidRecord* holder = usable_record(registry, cred.holder_did);
  if (!holder) {
    report.failures.push_back("holder did cannot be resolved");
  } else {
    report.holder_sig_ok =
        ed25519_verify(holder->controller, presentation.signable_bytes(),
                       presentation.holder_signature);
    if (!report.holder_sig_ok) {
      report.failures.push_back("holder signature does not verify");
    }
  }

  report.audience_ok = presentation.audience == audience;
  if (!report.audience_ok) {
    report.failures.push_back("presentation is scoped to another audience");
  }

  report.digests_ok = true;
  std::set<std::string> disclosed_names;
  for (const DisclosedAttribute& d : presentation.disclosed) {
    if (!disclosed_names.insert(d.name).second) {
      report.digests_ok = false;
      report.failures.push_back("attribute '" + d.name + "' disclosed twice");
      continue;
    }
    auto it = std::find_if(cred.attributes.begin(), cred.attributes.end(),
                           [&](const SaltedAttribute& a) { return a.name == d.name; });
    if (it == cred.attributes.end()) {
      report.digests_ok = false;
      report.failures.push_back("disclosed attribute '" + d.name +
                                "' is not in the credential");
      continue;
    }
    if (salted_attribute_digest(d.name, d.value, d.nonce) != it->digest) {
      report.digests_ok = false;
      report.failures.push_back("digest mismatch for attribute '" + d.name + "'");
    }
  }
  for (const SaltedAttribute& a : cred.attributes) {
    if (!disclosed_names.count(a.name)) report.undisclosed.push_back(a.name);
  }
  return report;
}

PresentationReport verify_credential(const DidRegistry& registry,
                                     const Credential& credential) {
  PresentationReport report;
  report.scheme_ok = credential.scheme != CredScheme::Hashed;
  if (!report.scheme_ok) {
    report.failures.push_back("hashed credentials verify via a presentation");
    return report;
  }
  check_issuer_side(registry, credential, report);
  // No holder proof or audience is involved in a bare credential check.
  report.holder_sig_ok = true;
  report.audience_ok = true;
  report.digests_ok = true;
  return report;
}

Digest32 revoke_credential(DidRegistry& registry, Wallet& wallet,
                           const std::string& key,
                           const Credential& credential) {
  if (credential.cred_id != sha256(credential.signable_bytes())) {
    fail(Errc::UnknownCredential, "credential id does not match its content");
  }
  const DidRecord* issuer = usable_record(registry, credential.issuer_did);
  if (!issuer) {
    fail(Errc::UnknownCredential,
         "issuer " + credential.issuer_did + " is not registered");
  }
  if (issuer->controller != wallet.pub(key)) {
    fail(Errc::NotIssuer,
         "key '" + key + "' does not control " + credential.issuer_did);
  }

  RevokeCredentialPayload p;
  p.cred_id = to_hex(credential.cred_id);
  p.issuer_did = credential.issuer_did;
  const PublicKey& sender = wallet.pub(key);
  Transaction tx = make_transaction(
      sender, p, registry.ledger().next_nonce(sender),
      [&](std::span<const uint8_t> msg) {
        return wallet.sign(key, msg, SignPurpose::Credential);
      });
  return registry.ledger().submit(tx);
}

bool is_revoked(const DidRegistry& registry, const Credential& credential) {
  return registry.ledger().state().revocations.count(
             to_hex(credential.cred_id)) > 0;
}

}  // namespace ssi
