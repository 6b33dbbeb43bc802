#include "ssi/scenario.hpp"

#include <algorithm>
#include <fstream>

#include "ssi/errors.hpp"
#include "ssi/shards.hpp"

namespace ssi {

const std::array<const char*, 12> kPatternNames = {
    "MasterSubKey",    "HotColdWallet",     "KeyShards",
    "IdentifierRegistry", "MultipleRegistration", "SocialMediaPair",
    "DualResolution",  "DelegateList",      "SelectiveContentGeneration",
    "TimeConstrainedAccess", "OneOffAccess", "BlockchainAnchor",
};

Json Transcript::to_json() const {
  Json steps_json = Json::array();
  for (const TranscriptStep& s : steps) {
    steps_json.push_back({{"action", s.action},
                          {"expect", s.expect},
                          {"height", s.height},
                          {"index", s.index},
                          {"outcome", s.outcome}});
  }
  Json lifecycle_json = Json::array();
  for (const LifecycleEvent& e : lifecycle) {
    lifecycle_json.push_back({{"from", e.from},
                              {"id", e.id},
                              {"kind", e.kind},
                              {"step", e.step},
                              {"to", e.to}});
  }
  Json j;
  j["all_matched"] = all_matched;
  j["final_ledger_digest"] = final_ledger_digest;
  if (!all_matched) j["first_mismatch"] = first_mismatch;
  j["lifecycle"] = lifecycle_json;
  j["scenario"] = scenario;
  j["seed"] = seed;
  j["steps"] = steps_json;
  return j;
}

Transcript Transcript::from_json(const Json& j) {
  Transcript t;
  t.scenario = j.at("scenario").get<std::string>();
  t.seed = j.at("seed").get<uint64_t>();
  t.all_matched = j.at("all_matched").get<bool>();
  if (j.contains("first_mismatch")) {
    t.first_mismatch = j["first_mismatch"].get<size_t>();
  }
  t.final_ledger_digest = j.at("final_ledger_digest").get<std::string>();
  for (const Json& s : j.at("steps")) {
    t.steps.push_back({s.at("index").get<size_t>(),
                       s.at("action").get<std::string>(),
                       s.at("expect").get<std::string>(),
                       s.at("outcome").get<std::string>(),
                       s.at("height").get<Height>()});
  }
  for (const Json& e : j.at("lifecycle")) {
    t.lifecycle.push_back(
        {e.at("kind").get<std::string>(), e.at("id").get<std::string>(),
         e.at("from").get<std::string>(), e.at("to").get<std::string>(),
         e.at("step").get<size_t>()});
  }
  return t;
}

LifecycleTables LifecycleTables::from_json(const Json& j) {
  LifecycleTables tables;
  for (const auto& [kind, mj] : j.items()) {
    Machine m;
    for (const Json& s : mj.at("initial")) m.initial.insert(s.get<std::string>());
    for (const auto& [from, tos] : mj.at("transitions").items()) {
      std::set<std::string>& out = m.transitions[from];
      for (const Json& to : tos) out.insert(to.get<std::string>());
    }
    tables.machines[kind] = std::move(m);
  }
  return tables;
}

LifecycleTables LifecycleTables::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    fail(Errc::ParseError, path + ": " + e.what());
  }
  return from_json(j);
}

const char* LifecycleTables::default_path() {
  return SSI_DATA_DIR "/lifecycles.json";
}

LifecycleReport lifecycle_check(const Transcript& transcript,
                                const LifecycleTables& tables) {
  LifecycleReport report;
  std::map<std::pair<std::string, std::string>, std::string> current;
  for (const LifecycleEvent& e : transcript.lifecycle) {
    std::string where = "step " + std::to_string(e.step) + ": " + e.kind +
                        " '" + e.id + "'";
    auto mit = tables.machines.find(e.kind);
    if (mit == tables.machines.end()) {
      report.violations.push_back(where + ": unknown lifecycle kind");
      continue;
    }
    const LifecycleTables::Machine& m = mit->second;
    auto key = std::make_pair(e.kind, e.id);
    auto cit = current.find(key);
    if (cit == current.end()) {
      if (!e.from.empty()) {
        report.violations.push_back(where + ": first event starts at '" +
                                    e.from + "' instead of creation");
      } else if (!m.initial.count(e.to)) {
        report.violations.push_back(where + ": '" + e.to +
                                    "' is not a legal initial state");
      }
    } else {
      if (e.from != cit->second) {
        report.violations.push_back(where + ": event leaves '" + e.from +
                                    "' but the object is in '" + cit->second +
                                    "'");
      }
      auto tit = m.transitions.find(e.from);
      if (tit == m.transitions.end() || !tit->second.count(e.to)) {
        report.violations.push_back(where + ": transition '" + e.from +
                                    "' -> '" + e.to + "' is not allowed");
      }
    }
    current[key] = e.to;
  }
  return report;
}

std::set<std::string> scenario_patterns(const Json& scenario) {
  std::set<std::string> out;
  std::map<std::string, int> registrations_per_actor;
  for (const Json& step : scenario.at("steps")) {
    const std::string action = step.value("action", "");
    if (action == "derive_subkey") out.insert("MasterSubKey");
    if (action == "connect_cold" || action == "disconnect_cold" ||
        (action == "create_actor" && step.value("wallet", "hot") == "cold")) {
      out.insert("HotColdWallet");
    }
    if (action == "split_key" || action == "reconstruct_key") {
      out.insert("KeyShards");
    }
    if (action == "register_did" || action == "resolve" ||
        action == "update_document" || action == "revoke_did") {
      out.insert("IdentifierRegistry");
    }
    // A registration expected to fail creates no identifier, so it does
    // not count toward an actor holding several.
    if (action == "register_did" && step.value("expect", "") == "ok") {
      if (++registrations_per_actor[step.value("actor", "")] >= 2) {
        out.insert("MultipleRegistration");
      }
    }
    if (action == "bind_social" || action == "verify_social") {
      out.insert("SocialMediaPair");
    }
    if (action == "dual_resolve") out.insert("DualResolution");
    if (action == "set_delegates" || action == "propose_recovery" ||
        action == "approve_recovery" || action == "finalize_recovery" ||
        action == "cancel_recovery") {
      out.insert("DelegateList");
    }
    if (action == "issue_predicate" || action == "make_presentation" ||
        (action == "issue" && (step.value("scheme", "") == "atomic" ||
                               step.value("scheme", "") == "hashed"))) {
      out.insert("SelectiveContentGeneration");
    }
    if (action == "create_link") {
      const std::string type =
          step.contains("policy") ? step["policy"].value("type", "") : "";
      if (type == "time_window") out.insert("TimeConstrainedAccess");
      if (type == "one_off") out.insert("OneOffAccess");
    }
    if (action == "anchor_add" || action == "anchor_flush" ||
        action == "verify_anchored") {
      out.insert("BlockchainAnchor");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

struct ScenarioRunner::World {
  uint64_t seed;
  Rng rng;
  Ledger ledger;
  ContentStore store;
  SocialStore social;
  DidRegistry registry;
  LinkService links;
  std::optional<AnchorService> anchor;

  struct Actor {
    std::set<std::string> roles;
    Wallet wallet{WalletKind::Hot};
  };
  std::map<std::string, Actor> actors;

  std::map<std::string, std::string> dids;       // handle -> did
  std::map<std::string, std::string> did_handle; // did -> handle
  std::map<std::string, std::string> proposals;  // handle -> proposal id
  // proposal handle -> (actor, key) that holds the proposed new key
  std::map<std::string, std::pair<std::string, std::string>> proposal_key;
  std::map<std::string, IssueResult> issues;
  std::map<std::string, Presentation> presentations;
  std::map<std::string, std::vector<KeyShard>> shards;
  std::map<std::string, std::string> tokens;
  std::map<std::string, AnchorReceipt> receipts;
  std::vector<std::string> anchor_names;         // pending receipt handles
  std::map<std::string, Bytes> anchor_content;

  std::vector<LifecycleEvent> events;
  std::map<std::string, std::string> did_state;   // did -> state name
  std::map<std::string, std::string> pre_recovery; // did -> state before
  // did -> (actor, key) currently controlling it
  std::map<std::string, std::pair<std::string, std::string>> did_controller;
  std::map<std::string, std::string> cred_state;  // cred id hex -> state
  std::map<std::string, std::string> cred_event_id;  // cred id hex -> event id
  size_t step_index = 0;

  explicit World(uint64_t s)
      : seed(s), rng(s), registry(ledger, store) {}

  // ----- helpers -----

  [[noreturn]] void unresolved(const std::string& what) {
    fail(Errc::UnresolvedReference,
         "step " + std::to_string(step_index) + ": " + what);
  }

  void emit(const std::string& kind, const std::string& id,
            const std::string& from, const std::string& to) {
    events.push_back({kind, id, from, to, step_index});
  }

  Actor& actor(const Json& step, const char* field = "actor") {
    std::string name = str(step, field);
    auto it = actors.find(name);
    if (it == actors.end()) unresolved("unknown actor '" + name + "'");
    return it->second;
  }

  std::string str(const Json& step, const char* field) {
    if (!step.contains(field)) {
      fail(Errc::ParseError, "step " + std::to_string(step_index) +
                                 ": missing field '" + field + "'");
    }
    return step.at(field).get<std::string>();
  }

  std::string did_ref(const std::string& ref) {
    auto it = dids.find(ref);
    if (it != dids.end()) return it->second;
    if (ref.rfind("did:sim:", 0) == 0) return ref;
    unresolved("unknown did handle '" + ref + "'");
  }

  std::string did_ref(const Json& step, const char* field) {
    return did_ref(str(step, field));
  }

  std::string key_event_id(const std::string& actor_name,
                           const std::string& key_name) {
    return actor_name + "/" + key_name;
  }

  void track_new_key(const std::string& actor_name, const std::string& key) {
    std::string id = key_event_id(actor_name, key);
    emit("key", id, "", "Generated");
    emit("key", id, "Generated", "Active");
  }

  void did_event(const std::string& did, const std::string& to) {
    std::string handle = did_handle.count(did) ? did_handle[did] : did;
    emit("did", handle, did_state[did], to);
    did_state[did] = to;
  }

  void cred_event(const std::string& cred_hex, const std::string& to) {
    emit("credential", cred_event_id[cred_hex], cred_state[cred_hex], to);
    cred_state[cred_hex] = to;
  }

  void track_new_credential(const Credential& c, const std::string& event_id) {
    std::string hex = to_hex(c.cred_id);
    cred_event_id[hex] = event_id;
    emit("credential", event_id, "", "Issued");
    cred_state[hex] = "Issued";
  }

  void require_role(const Actor& a, const std::string& name,
                    const std::string& role, const std::string& doing) {
    if (!a.roles.count(role)) {
      fail(Errc::RoleViolation,
           "'" + name + "' is not " + (role == "issuer" ? "an " : "a ") + role +
               " and cannot " + doing);
    }
  }

  void maybe_produce(const Json& step) {
    if (step.value("produce", true)) ledger.produce_block();
  }

  const Credential& credential_ref(const Json& step, IssueResult** result_out) {
    std::string handle = str(step, "credential");
    auto it = issues.find(handle);
    if (it == issues.end()) unresolved("unknown credential '" + handle + "'");
    size_t index = step.value("index", size_t{0});
    if (index >= it->second.credentials.size()) {
      unresolved("credential index out of range for '" + handle + "'");
    }
    if (result_out) *result_out = &it->second;
    return it->second.credentials[index];
  }

  Height now_of(const Json& step) {
    Height now = ledger.height();
    if (step.contains("now")) return step.at("now").get<Height>();
    if (step.contains("now_offset")) {
      now += step.at("now_offset").get<Height>();
    }
    return now;
  }

  std::vector<Claim> claims_of(const Json& step) {
    std::vector<Claim> claims;
    const Json& cj = step.at("claims");
    if (cj.is_array()) {
      for (const Json& c : cj) {
        claims.push_back({c.at("name").get<std::string>(),
                          c.at("value").get<std::string>()});
      }
    } else {
      for (const auto& [name, value] : cj.items()) {
        claims.push_back({name, value.get<std::string>()});
      }
    }
    return claims;
  }

  // ----- actions -----

  void do_create_actor(const Json& step) {
    std::string name = str(step, "actor");
    if (actors.count(name)) {
      fail(Errc::ParseError, "actor '" + name + "' already exists");
    }
    Actor a;
    a.wallet = Wallet(step.value("wallet", "hot") == "cold" ? WalletKind::Cold
                                                            : WalletKind::Hot);
    if (step.contains("roles")) {
      for (const Json& r : step["roles"]) a.roles.insert(r.get<std::string>());
    }
    actors[name] = std::move(a);
  }

  void do_generate_master(const Json& step) {
    std::string name = str(step, "actor");
    Actor& a = actor(step);
    std::string key = step.value("key", "master");
    Bytes seed_bytes = rng.bytes(32);
    a.wallet.add_master(key, generate_master(seed_bytes));
    track_new_key(name, key);
  }

  void do_derive_subkey(const Json& step) {
    std::string name = str(step, "actor");
    Actor& a = actor(step);
    std::string label = str(step, "label");
    std::string key = step.value("key", label);
    std::string master_name = step.value("master", "master");
    const WalletEntry& master_entry = a.wallet.entry(master_name);
    MasterKey master;
    master.keypair = master_entry.keypair;
    master.state = master_entry.state;
    a.wallet.add_subkey(key, derive_subkey(master, label));
    track_new_key(name, key);
  }

  void do_mark_key(const Json& step) {
    std::string name = str(step, "actor");
    Actor& a = actor(step);
    std::string key = str(step, "key");
    KeyState to = key_state_from_name(str(step, "state"));
    KeyState from = a.wallet.entry(key).state;
    a.wallet.set_state(key, to);
    emit("key", key_event_id(name, key), key_state_name(from),
         key_state_name(to));
  }

  void do_connect_cold(const Json& step) { actor(step).wallet.connect(); }
  void do_disconnect_cold(const Json& step) { actor(step).wallet.disconnect(); }

  void do_split_key(const Json& step) {
    Actor& a = actor(step);
    const WalletEntry& e = a.wallet.entry(str(step, "key"));
    unsigned t = step.at("t").get<unsigned>();
    unsigned n = step.at("n").get<unsigned>();
    shards[str(step, "as")] =
        split_secret(e.keypair.seed, t, n, rng);
  }

  void do_reconstruct_key(const Json& step) {
    std::string handle = str(step, "shards");
    auto it = shards.find(handle);
    if (it == shards.end()) unresolved("unknown shard set '" + handle + "'");
    std::vector<KeyShard> use;
    if (step.contains("use")) {
      for (const Json& idx : step["use"]) {
        uint8_t want = idx.get<uint8_t>();
        auto sit = std::find_if(
            it->second.begin(), it->second.end(),
            [&](const KeyShard& s) { return s.index == want; });
        if (sit == it->second.end()) {
          unresolved("no shard with index " + std::to_string(want));
        }
        use.push_back(*sit);
      }
    } else {
      use = it->second;
    }
    Bytes secret = reconstruct_secret(use);
    if (step.contains("into_actor")) {
      std::string into_actor = str(step, "into_actor");
      auto ait = actors.find(into_actor);
      if (ait == actors.end()) unresolved("unknown actor '" + into_actor + "'");
      std::string key = str(step, "into_key");
      ait->second.wallet.add_master(key, generate_master(secret));
      track_new_key(into_actor, key);
    }
  }

  void do_register_did(const Json& step) {
    std::string name = str(step, "actor");
    Actor& a = actor(step);
    std::string key = str(step, "key");
    DdoDraft draft;
    if (step.contains("service")) {
      for (const Json& s : step["service"]) {
        draft.service.push_back({s.at("name").get<std::string>(),
                                 s.at("endpoint").get<std::string>()});
      }
    }
    if (step.contains("extra")) draft.extra = step["extra"];
    std::string did = registry.register_did(a.wallet, key, draft, rng);
    std::string handle = str(step, "as");
    dids[handle] = did;
    did_handle[did] = handle;
    did_controller[did] = {name, key};
    emit("did", handle, "", "Registered");
    did_state[did] = "Registered";
    maybe_produce(step);
  }

  void do_resolve(const Json& step) { registry.resolve(did_ref(step, "did")); }

  void do_dual_resolve(const Json& step) {
    registry.dual_resolve(did_ref(step, "a"), did_ref(step, "b"));
  }

  void do_update_document(const Json& step) {
    Actor& a = actor(step);
    std::string key = str(step, "key");
    std::string did = did_ref(step, "did");
    DidDocument doc = registry.resolve(did);
    if (step.contains("service")) {
      doc.service.clear();
      for (const Json& s : step["service"]) {
        doc.service.push_back({s.at("name").get<std::string>(),
                               s.at("endpoint").get<std::string>()});
      }
    }
    if (step.contains("extra")) doc.extra = step["extra"];
    registry.update_document(a.wallet, key, did, std::move(doc));
    did_event(did, "Updated");
    maybe_produce(step);
  }

  void do_set_delegates(const Json& step) {
    Actor& a = actor(step);
    std::vector<std::string> delegates;
    for (const Json& d : step.at("delegates")) {
      delegates.push_back(did_ref(d.get<std::string>()));
    }
    std::string did = did_ref(step, "did");
    registry.set_delegates(a.wallet, str(step, "key"), did, delegates,
                           step.at("threshold").get<uint32_t>(),
                           step.value("timelock", Height{10}));
    did_event(did, "Updated");
    maybe_produce(step);
  }

  void do_propose_recovery(const Json& step) {
    std::string name = str(step, "actor");
    Actor& a = actor(step);
    std::string newkey = str(step, "newkey");
    std::string did = did_ref(step, "did");
    std::string id = registry.propose_recovery(a.wallet, newkey, did);
    std::string handle = str(step, "as");
    proposals[handle] = id;
    proposal_key[handle] = {name, newkey};
    pre_recovery[did] = did_state[did];
    did_event(did, "Recovering");
    maybe_produce(step);
  }

  std::string proposal_ref(const Json& step) {
    std::string handle = str(step, "proposal");
    auto it = proposals.find(handle);
    if (it == proposals.end()) unresolved("unknown proposal '" + handle + "'");
    return it->second;
  }

  void do_approve_recovery(const Json& step) {
    Actor& a = actor(step);
    registry.approve_recovery(a.wallet, str(step, "key"),
                              did_ref(step, "delegate"), proposal_ref(step));
    maybe_produce(step);
  }

  void do_finalize_recovery(const Json& step) {
    Actor& a = actor(step);
    std::string handle = str(step, "proposal");
    std::string id = proposal_ref(step);
    std::string did = registry.ledger().state().find_proposal(id)
                          ? registry.ledger().state().find_proposal(id)->did
                          : "";
    registry.finalize_recovery(a.wallet, str(step, "key"), id);

    // The old controller key is out of service either way: recovered
    // from a bad state, or rotated out of an active one.
    auto old_it = did_controller.find(did);
    if (old_it != did_controller.end()) {
      auto [old_actor, old_key] = old_it->second;
      auto ait = actors.find(old_actor);
      if (ait != actors.end() && ait->second.wallet.has(old_key)) {
        KeyState from = ait->second.wallet.entry(old_key).state;
        KeyState to = (from == KeyState::Compromised || from == KeyState::Lost)
                          ? KeyState::Recovered
                          : KeyState::Revoked;
        if (from != to) {
          ait->second.wallet.set_state(old_key, to);
          emit("key", key_event_id(old_actor, old_key), key_state_name(from),
               key_state_name(to));
        }
      }
    }
    did_event(did, "Recovered");
    auto pk = proposal_key.find(handle);
    if (pk != proposal_key.end()) did_controller[did] = pk->second;
    maybe_produce(step);
  }

  void do_cancel_recovery(const Json& step) {
    Actor& a = actor(step);
    std::string id = proposal_ref(step);
    const RecoveryProposal* prop = registry.ledger().state().find_proposal(id);
    std::string did = prop ? prop->did : "";
    registry.cancel_recovery(a.wallet, str(step, "key"), id);
    std::string back = pre_recovery.count(did) ? pre_recovery[did] : "Updated";
    did_event(did, back);
    maybe_produce(step);
  }

  void do_revoke_did(const Json& step) {
    Actor& a = actor(step);
    std::string did = did_ref(step, "did");
    registry.revoke_did(a.wallet, str(step, "key"), did);
    did_event(did, "Revoked");
    maybe_produce(step);
  }

  void do_bind_social(const Json& step) {
    Actor& a = actor(step);
    std::string did = did_ref(step, "did");
    registry.bind_social(a.wallet, str(step, "key"), did,
                         str(step, "profile"), social);
    did_event(did, "Updated");
    maybe_produce(step);
  }

  void do_verify_social(const Json& step) {
    SocialCheck check = registry.verify_social(did_ref(step, "did"), social);
    if (!check.post_found) {
      fail(Errc::SocialPostMissing, "no post naming the did on the profile");
    }
    if (!check.signature_valid) {
      fail(Errc::SignatureInvalid, "binding not signed by the controller");
    }
  }

  void do_delete_social_post(const Json& step) {
    std::string did = did_ref(step, "did");
    DidDocument doc = registry.resolve(did);
    if (!doc.social || !social.delete_post(doc.social->post_url)) {
      fail(Errc::NotFound, "no social post to delete for " + did);
    }
  }

  void do_issue(const Json& step) {
    std::string name = str(step, "actor");
    Actor& a = actor(step);
    require_role(a, name, "issuer", "issue credentials");
    IssueResult result =
        issue(registry, a.wallet, str(step, "key"), did_ref(step, "issuer"),
              did_ref(step, "holder"), claims_of(step),
              cred_scheme_from_name(str(step, "scheme")), rng);
    std::string handle = str(step, "as");
    for (size_t i = 0; i < result.credentials.size(); ++i) {
      std::string event_id =
          result.credentials.size() == 1
              ? handle
              : handle + "[" + std::to_string(i) + "]";
      track_new_credential(result.credentials[i], event_id);
    }
    issues[handle] = std::move(result);
  }

  void do_issue_predicate(const Json& step) {
    std::string name = str(step, "actor");
    Actor& a = actor(step);
    require_role(a, name, "issuer", "issue credentials");
    const Json& source = step.at("source");
    Credential cred = issue_predicate(
        registry, a.wallet, str(step, "key"), did_ref(step, "issuer"),
        did_ref(step, "holder"),
        {source.at("name").get<std::string>(),
         source.at("value").get<std::string>()},
        str(step, "predicate"));
    std::string handle = str(step, "as");
    track_new_credential(cred, handle);
    IssueResult result;
    result.credentials.push_back(std::move(cred));
    issues[handle] = std::move(result);
  }

  void do_make_presentation(const Json& step) {
    std::string name = str(step, "actor");
    Actor& a = actor(step);
    require_role(a, name, "holder", "present credentials");
    IssueResult* result = nullptr;
    const Credential& cred = credential_ref(step, &result);
    std::set<std::string> disclose;
    for (const Json& d : step.at("disclose")) {
      disclose.insert(d.get<std::string>());
    }
    Presentation p =
        make_presentation(registry, a.wallet, str(step, "key"), cred,
                          result->secrets, disclose, did_ref(step, "audience"));
    presentations[str(step, "as")] = std::move(p);
    cred_event(to_hex(cred.cred_id), "Presented");
  }

  const Presentation& presentation_ref(const Json& step) {
    std::string handle = str(step, "presentation");
    auto it = presentations.find(handle);
    if (it == presentations.end()) {
      unresolved("unknown presentation '" + handle + "'");
    }
    return it->second;
  }

  void report_or_throw(const PresentationReport& report, const char* what) {
    if (report.valid()) return;
    if (!report.not_revoked) fail(Errc::Revoked, "credential is revoked");
    fail(Errc::SignatureInvalid,
         report.failures.empty() ? std::string(what) + " invalid"
                                 : report.failures.front());
  }

  void do_verify_presentation(const Json& step) {
    report_or_throw(verify_presentation(registry, presentation_ref(step),
                                        did_ref(step, "audience")),
                    "presentation");
  }

  void do_verify_credential(const Json& step) {
    report_or_throw(verify_credential(registry, credential_ref(step, nullptr)),
                    "credential");
  }

  void do_revoke_credential(const Json& step) {
    std::string name = str(step, "actor");
    Actor& a = actor(step);
    require_role(a, name, "issuer", "revoke credentials");
    const Credential& cred = credential_ref(step, nullptr);
    revoke_credential(registry, a.wallet, str(step, "key"), cred);
    cred_event(to_hex(cred.cred_id), "Revoked");
    maybe_produce(step);
  }

  void do_create_link(const Json& step) {
    std::string name = str(step, "actor");
    Actor& a = actor(step);
    require_role(a, name, "holder", "share presentations");
    const Presentation& p = presentation_ref(step);
    const Json& pj = step.at("policy");
    Height now = now_of(step);
    LinkPolicy policy;
    std::string type = pj.at("type").get<std::string>();
    if (type == "time_window") {
      policy = TimeWindowPolicy{now + pj.at("lifetime").get<Height>()};
    } else if (type == "one_off") {
      policy = OneOffPolicy{};
    } else {
      fail(Errc::ParseError, "policy type must be time_window or one_off");
    }
    ShareLink link = links.create(p, policy, now, rng);
    tokens[str(step, "as")] = link.token;
  }

  std::string token_ref(const Json& step) {
    if (step.contains("token")) return str(step, "token");
    std::string handle = str(step, "link");
    auto it = tokens.find(handle);
    if (it == tokens.end()) unresolved("unknown link '" + handle + "'");
    return it->second;
  }

  void do_access_link(const Json& step) {
    Presentation p = links.access(token_ref(step), now_of(step));
    std::string hex = to_hex(p.credential.cred_id);
    if (cred_state.count(hex)) cred_event(hex, "Presented");
    if (step.contains("as")) presentations[str(step, "as")] = std::move(p);
  }

  void do_revoke_link(const Json& step) {
    Actor& a = actor(step);
    std::string token = token_ref(step);
    Signature sig = a.wallet.sign(str(step, "key"), link_revoke_bytes(token),
                                  SignPurpose::LinkControl);
    links.revoke(token, sig, registry);
  }

  void do_purge_links(const Json& step) { links.purge_expired(now_of(step)); }

  void do_produce_block(const Json& step) {
    ledger.produce_blocks(step.value("count", size_t{1}));
  }

  void do_verify_chain(const Json&) {
    ChainCheck check = ledger.verify_chain();
    if (!check.ok) {
      fail(Errc::IntegrityViolation,
           "chain invalid at height " + std::to_string(check.height) + ": " +
               check.reason);
    }
  }

  AnchorService& anchor_service() {
    if (!anchor) anchor.emplace(keypair_from_seed(rng.bytes(32)));
    return *anchor;
  }

  void do_anchor_add(const Json& step) {
    Bytes content;
    if (step.contains("credential")) {
      content = str_bytes(credential_ref(step, nullptr).to_json().dump());
    } else if (step.contains("presentation")) {
      content = str_bytes(presentation_ref(step).to_json().dump());
    } else {
      content = str_bytes(str(step, "text"));
    }
    std::string handle = str(step, "as");
    anchor_service().add(sha256(content));
    anchor_names.push_back(handle);
    anchor_content[handle] = std::move(content);
  }

  void do_anchor_flush(const Json& step) {
    std::vector<AnchorReceipt> out = anchor_service().flush(ledger);
    for (size_t i = 0; i < out.size(); ++i) {
      receipts[anchor_names[i]] = std::move(out[i]);
    }
    anchor_names.clear();
    (void)step;
  }

  void do_verify_anchored(const Json& step) {
    std::string handle = str(step, "receipt");
    auto rit = receipts.find(handle);
    if (rit == receipts.end()) unresolved("unknown receipt '" + handle + "'");
    auto cit = anchor_content.find(handle);
    if (cit == anchor_content.end()) {
      unresolved("no content kept for '" + handle + "'");
    }
    Bytes content = cit->second;
    if (step.value("tamper", false)) content.push_back('!');
    AnchorCheck check = verify_anchored(content, rit->second, ledger);
    if (!check.ok) fail(Errc::DigestMismatch, check.reason);
  }

  void execute(const std::string& action, const Json& step) {
    if (action == "create_actor") return do_create_actor(step);
    if (action == "generate_master") return do_generate_master(step);
    if (action == "derive_subkey") return do_derive_subkey(step);
    if (action == "mark_key") return do_mark_key(step);
    if (action == "connect_cold") return do_connect_cold(step);
    if (action == "disconnect_cold") return do_disconnect_cold(step);
    if (action == "split_key") return do_split_key(step);
    if (action == "reconstruct_key") return do_reconstruct_key(step);
    if (action == "register_did") return do_register_did(step);
    if (action == "resolve") return do_resolve(step);
    if (action == "dual_resolve") return do_dual_resolve(step);
    if (action == "update_document") return do_update_document(step);
    if (action == "set_delegates") return do_set_delegates(step);
    if (action == "propose_recovery") return do_propose_recovery(step);
    if (action == "approve_recovery") return do_approve_recovery(step);
    if (action == "finalize_recovery") return do_finalize_recovery(step);
    if (action == "cancel_recovery") return do_cancel_recovery(step);
    if (action == "revoke_did") return do_revoke_did(step);
    if (action == "bind_social") return do_bind_social(step);
    if (action == "verify_social") return do_verify_social(step);
    if (action == "delete_social_post") return do_delete_social_post(step);
    if (action == "issue") return do_issue(step);
    if (action == "issue_predicate") return do_issue_predicate(step);
    if (action == "make_presentation") return do_make_presentation(step);
    if (action == "verify_presentation") return do_verify_presentation(step);
    if (action == "verify_credential") return do_verify_credential(step);
    if (action == "revoke_credential") return do_revoke_credential(step);
    if (action == "create_link") return do_create_link(step);
    if (action == "access_link") return do_access_link(step);
    if (action == "revoke_link") return do_revoke_link(step);
    if (action == "purge_links") return do_purge_links(step);
    if (action == "produce_block") return do_produce_block(step);
    if (action == "verify_chain") return do_verify_chain(step);
    if (action == "anchor_add") return do_anchor_add(step);
    if (action == "anchor_flush") return do_anchor_flush(step);
    if (action == "verify_anchored") return do_verify_anchored(step);
    fail(Errc::ParseError, "step " + std::to_string(step_index) +
                               ": unknown action '" + action + "'");
  }
};

ScenarioRunner::ScenarioRunner(uint64_t seed)
    : world_(std::make_unique<World>(seed)) {}

ScenarioRunner::~ScenarioRunner() = default;

Ledger& ScenarioRunner::ledger() { return world_->ledger; }
LinkService& ScenarioRunner::links() { return world_->links; }
const std::map<std::string, std::string>& ScenarioRunner::dids() const {
  return world_->dids;
}

Transcript ScenarioRunner::run(const Json& scenario) {
  Transcript t;
  t.scenario = scenario.at("name").get<std::string>();
  t.seed = world_->seed;
  const Json& steps = scenario.at("steps");
  if (!steps.is_array()) fail(Errc::ParseError, "steps must be an array");

  for (size_t i = 0; i < steps.size(); ++i) {
    const Json& step = steps[i];
    world_->step_index = i;
    if (!step.contains("action") || !step.contains("expect")) {
      fail(Errc::ParseError, "step " + std::to_string(i) +
                                 ": every step needs an action and an expect");
    }
    std::string action = step.at("action").get<std::string>();
    std::string expect = step.at("expect").get<std::string>();
    std::string outcome = "ok";
    size_t events_before = world_->events.size();
    try {
      world_->execute(action, step);
    } catch (const SsiError& e) {
      if (e.code() == Errc::ParseError ||
          e.code() == Errc::UnresolvedReference) {
        throw;  // scenario defects, not outcomes
      }
      outcome = e.name();
      // A failed operation must not leave lifecycle traces.
      world_->events.resize(events_before);
    } catch (const Json::exception& e) {
      fail(Errc::ParseError,
           "step " + std::to_string(i) + " (" + action + "): " + e.what());
    }
    t.steps.push_back({i, action, expect, outcome, world_->ledger.height()});
    if (outcome != expect) {
      t.all_matched = false;
      t.first_mismatch = i;
      break;
    }
  }
  t.lifecycle = world_->events;
  t.final_ledger_digest =
      to_hex(sha256(str_bytes(world_->ledger.to_json().dump())));
  return t;
}

Transcript ScenarioRunner::run_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open " + path);
  Json scenario;
  try {
    in >> scenario;
  } catch (const Json::exception& e) {
    fail(Errc::ParseError, path + ": " + e.what());
  }
  return run(scenario);
}

}  // namespace ssi
