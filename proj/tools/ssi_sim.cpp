// ssi-sim: command-line face of the identity toolkit. State lives in a
// directory (--state) so successive invocations continue the same
// world: ledger, stores, wallets, links, anchors and the PRNG position
// all persist. Exit codes: 0 success, 1 operation or expectation
// failure, 2 usage or parse error.

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "ssi/anchor.hpp"
#include "ssi/credentials.hpp"
#include "ssi/errors.hpp"
#include "ssi/scenario.hpp"
#include "ssi/share_link_server.hpp"
#include "ssi/share_links.hpp"
#include "ssi/shards.hpp"

namespace fs = std::filesystem;
using namespace ssi;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::NotFound, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) fail(Errc::NotFound, "cannot write " + path.string());
}

Json issue_result_json(const IssueResult& r) {
  Json creds = Json::array();
  for (const Credential& c : r.credentials) creds.push_back(c.to_json());
  Json secrets = Json::object();
  for (const auto& [name, s] : r.secrets) {
    secrets[name] = {{"value", s.value}, {"nonce", to_hex(s.nonce)}};
  }
  return {{"credentials", std::move(creds)}, {"secrets", std::move(secrets)}};
}

IssueResult issue_result_from_json(const Json& j) {
  IssueResult r;
  for (const Json& cj : j.at("credentials")) {
    r.credentials.push_back(Credential::from_json(cj));
  }
  for (const auto& [name, sj] : j.at("secrets").items()) {
    r.secrets[name] = {sj.at("value").get<std::string>(),
                       from_hex(sj.at("nonce").get<std::string>())};
  }
  return r;
}

// name=value, split at the first '='.
std::pair<std::string, std::string> split_pair(const std::string& s,
                                               const char* what) {
  size_t eq = s.find('=');
  if (eq == std::string::npos) {
    fail(Errc::ParseError, std::string(what) + " must look like name=value");
  }
  return {s.substr(0, eq), s.substr(eq + 1)};
}

struct CliActor {
  std::set<std::string> roles;
  Wallet wallet{WalletKind::Hot};
};

// The whole simulated world plus the symbol tables that let commands
// refer to things by short handles instead of hex.
struct CliWorld {
  fs::path dir;
  uint64_t seed;
  Rng rng;
  Ledger ledger;
  ContentStore store;
  SocialStore social;
  DidRegistry registry;
  LinkService links;
  std::optional<AnchorService> anchor;

  std::map<std::string, CliActor> actors;
  std::map<std::string, std::string> dids;
  std::map<std::string, std::string> proposals;
  std::map<std::string, std::string> tokens;
  std::map<std::string, Json> creds;          // handle -> issue result
  std::map<std::string, Json> presentations;  // handle -> presentation
  std::map<std::string, Json> receipts;       // handle -> {receipt, content}

  explicit CliWorld(uint64_t s) : seed(s), rng(s), registry(ledger, store) {}

  void load() {
    Json w = Json::parse(read_file(dir / "world.json"));
    seed = w.at("seed").get<uint64_t>();
    rng.restore_state(w.at("rng").get<std::string>());
    for (const auto& [name, aj] : w.at("actors").items()) {
      CliActor a;
      a.wallet = Wallet::from_json(aj.at("wallet"));
      for (const Json& r : aj.at("roles")) a.roles.insert(r.get<std::string>());
      actors[name] = std::move(a);
    }
    const Json& h = w.at("handles");
    dids = h.at("dids").get<std::map<std::string, std::string>>();
    proposals = h.at("proposals").get<std::map<std::string, std::string>>();
    tokens = h.at("tokens").get<std::map<std::string, std::string>>();
    for (const auto& [k, v] : h.at("creds").items()) creds[k] = v;
    for (const auto& [k, v] : h.at("presentations").items()) {
      presentations[k] = v;
    }
    for (const auto& [k, v] : h.at("receipts").items()) receipts[k] = v;

    ledger = Ledger::from_json(Json::parse(read_file(dir / "ledger.json")));
    store = ContentStore::from_json(Json::parse(read_file(dir / "content.json")));
    social = SocialStore::from_json(Json::parse(read_file(dir / "social.json")));
    links.load(Json::parse(read_file(dir / "links.json")));
    if (fs::exists(dir / "anchor.json")) {
      anchor = AnchorService::from_json(
          Json::parse(read_file(dir / "anchor.json")));
    }
  }

  void save() const {
    fs::create_directories(dir);
    Json actors_j = Json::object();
    for (const auto& [name, a] : actors) {
      actors_j[name] = {{"wallet", a.wallet.to_json()},
                        {"roles", Json(a.roles)}};
    }
    Json w = {{"seed", seed},
              {"rng", rng.save_state()},
              {"actors", std::move(actors_j)},
              {"handles",
               {{"dids", dids},
                {"proposals", proposals},
                {"tokens", tokens},
                {"creds", creds},
                {"presentations", presentations},
                {"receipts", receipts}}}};
    write_file(dir / "world.json", w.dump(2));
    write_file(dir / "ledger.json", ledger.to_json().dump(2));
    write_file(dir / "content.json", store.to_json().dump(2));
    write_file(dir / "social.json", social.to_json().dump(2));
    write_file(dir / "links.json", links.to_json().dump(2));
    if (anchor) write_file(dir / "anchor.json", anchor->to_json().dump(2));
  }

  CliActor& actor(const std::string& name) {
    auto it = actors.find(name);
    if (it == actors.end()) {
      fail(Errc::UnresolvedReference, "unknown actor '" + name + "'");
    }
    return it->second;
  }

  std::string did_of(const std::string& ref) const {
    auto it = dids.find(ref);
    if (it != dids.end()) return it->second;
    if (ref.rfind("did:sim:", 0) == 0) return ref;
    fail(Errc::UnresolvedReference, "unknown did handle '" + ref + "'");
  }

  std::string proposal_of(const std::string& ref) const {
    auto it = proposals.find(ref);
    if (it != proposals.end()) return it->second;
    if (ref.size() == 64) return ref;  // literal proposal id
    fail(Errc::UnresolvedReference, "unknown proposal '" + ref + "'");
  }

  std::string token_of(const std::string& ref) const {
    auto it = tokens.find(ref);
    return it != tokens.end() ? it->second : ref;
  }

  IssueResult cred_of(const std::string& ref) const {
    auto it = creds.find(ref);
    if (it == creds.end()) {
      fail(Errc::UnresolvedReference, "unknown credential '" + ref + "'");
    }
    return issue_result_from_json(it->second);
  }

  Presentation presentation_of(const std::string& ref) const {
    auto it = presentations.find(ref);
    if (it != presentations.end()) return Presentation::from_json(it->second);
    if (fs::exists(ref)) return Presentation::from_json(Json::parse(read_file(ref)));
    fail(Errc::UnresolvedReference, "unknown presentation '" + ref + "'");
  }

  AnchorService& anchor_service() {
    if (!anchor) anchor.emplace(keypair_from_seed(rng.bytes(32)));
    return *anchor;
  }
};

std::vector<ServiceEndpoint> parse_services(
    const std::vector<std::string>& specs) {
  std::vector<ServiceEndpoint> out;
  for (const std::string& s : specs) {
    auto [name, endpoint] = split_pair(s, "--service");
    out.push_back({name, endpoint});
  }
  return out;
}

void print_report(const PresentationReport& report) {
  if (report.valid()) {
    std::cout << "valid";
    if (!report.undisclosed.empty()) {
      std::cout << " (undisclosed:";
      for (const std::string& n : report.undisclosed) std::cout << " " << n;
      std::cout << ")";
    }
    std::cout << "\n";
    return;
  }
  std::cout << "INVALID\n";
  for (const std::string& f : report.failures) std::cout << "  " << f << "\n";
}

std::atomic<bool> g_stop{false};
void on_signal(int) { g_stop = true; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ssi-sim: self-sovereign identity toolkit simulator"};
  app.require_subcommand(1);

  std::string state_dir = "./ssi-state";
  uint64_t seed = 42;
  std::optional<Height> now_flag;
  app.add_option("--state", state_dir, "State directory")
      ->envname("SSI_STATE");
  app.add_option("--seed", seed,
                 "PRNG seed for a fresh state directory and for `run`");
  app.add_option("--now", now_flag,
                 "Logical time override for link operations (block height)");

  std::unique_ptr<CliWorld> world;
  bool dirty = false;
  auto w = [&]() -> CliWorld& {
    if (!world) {
      fs::path dir(state_dir);
      if (fs::exists(dir / "world.json")) {
        Json head = Json::parse(read_file(dir / "world.json"));
        world = std::make_unique<CliWorld>(head.at("seed").get<uint64_t>());
        world->dir = dir;
        world->load();
      } else {
        world = std::make_unique<CliWorld>(seed);
        world->dir = dir;
        dirty = true;  // persist even if the first command only reads
      }
    }
    return *world;
  };
  auto touch = [&] { dirty = true; };
  auto now_of = [&]() -> Height {
    return now_flag ? *now_flag : w().ledger.height();
  };

  int exit_code = 0;

  // ----- ledger -----
  auto* ledger_cmd = app.add_subcommand("ledger", "Inspect and advance the chain");
  ledger_cmd->require_subcommand(1);

  ledger_cmd->add_subcommand("height", "Print the current block height")
      ->callback([&] { std::cout << w().ledger.height() << "\n"; });

  {
    auto* c = ledger_cmd->add_subcommand("produce", "Produce blocks from the pool");
    auto count = std::make_shared<size_t>(1);
    c->add_option("--count", *count, "How many blocks");
    c->callback([&, count] {
      for (size_t i = 0; i < *count; ++i) {
        Block b = w().ledger.produce_block();
        std::cout << "block " << b.height << " (" << b.txs.size() << " txs)\n";
      }
      touch();
    });
  }

  ledger_cmd->add_subcommand("pool", "List transactions waiting for inclusion")
      ->callback([&] {
        for (const Transaction& tx : w().ledger.pool()) {
          std::cout << to_hex(tx.tx_id) << "  "
                    << payload_type_name(tx.payload) << "\n";
        }
        std::cout << w().ledger.pool().size() << " pending\n";
      });

  {
    auto* c = ledger_cmd->add_subcommand("block", "Print one block as JSON");
    auto height = std::make_shared<Height>(0);
    c->add_option("height", *height, "Block height")->required();
    c->callback([&, height] {
      const auto& blocks = w().ledger.blocks();
      if (*height >= blocks.size()) {
        fail(Errc::NotFound, "no block at height " + std::to_string(*height));
      }
      std::cout << blocks[*height].to_json().dump(2) << "\n";
    });
  }

  {
    auto* c = ledger_cmd->add_subcommand("tx", "Look a transaction up by id");
    auto id = std::make_shared<std::string>();
    c->add_option("id", *id, "Transaction id (hex)")->required();
    c->callback([&, id] {
      const Transaction* tx = w().ledger.find_tx(digest_from_hex(*id));
      if (!tx) fail(Errc::NotFound, "no transaction " + *id);
      const LedgerState& st = w().ledger.state();
      std::cout << tx->to_json().dump(2) << "\n";
      auto loc = st.tx_index.find(*id);
      if (loc != st.tx_index.end()) {
        std::cout << "included at height " << loc->second.height << " index "
                  << loc->second.index << "\n";
      }
      auto failed = st.failed.find(*id);
      if (failed != st.failed.end()) {
        std::cout << "rejected by state: " << failed->second << "\n";
      }
    });
  }

  ledger_cmd->add_subcommand("verify", "Re-check every block hash and signature")
      ->callback([&] {
        ChainCheck check = w().ledger.verify_chain();
        if (check.ok) {
          std::cout << "chain ok (" << w().ledger.blocks().size()
                    << " blocks)\n";
        } else {
          std::cout << "chain INVALID at height " << check.height << ": "
                    << check.reason << "\n";
          exit_code = 1;
        }
      });

  ledger_cmd->add_subcommand("dump", "Print the whole ledger as JSON")
      ->callback([&] { std::cout << w().ledger.to_json().dump(2) << "\n"; });

  // ----- wallet -----
  auto* wallet_cmd = app.add_subcommand("wallet", "Actors and their key stores");
  wallet_cmd->require_subcommand(1);

  {
    auto* c = wallet_cmd->add_subcommand("create", "Create an actor with a wallet");
    auto name = std::make_shared<std::string>();
    auto cold = std::make_shared<bool>(false);
    auto roles = std::make_shared<std::vector<std::string>>();
    c->add_option("name", *name, "Actor name")->required();
    c->add_flag("--cold", *cold, "Cold wallet (starts disconnected)");
    c->add_option("--role", *roles, "holder, issuer or verifier (repeatable)");
    c->callback([&, name, cold, roles] {
      if (w().actors.count(*name)) {
        fail(Errc::ParseError, "actor '" + *name + "' already exists");
      }
      CliActor a;
      a.wallet = Wallet(*cold ? WalletKind::Cold : WalletKind::Hot);
      a.roles.insert(roles->begin(), roles->end());
      w().actors[*name] = std::move(a);
      std::cout << "created " << *name << (*cold ? " (cold)" : "") << "\n";
      touch();
    });
  }

  for (const char* verb : {"connect", "disconnect"}) {
    auto* c = wallet_cmd->add_subcommand(
        verb, std::string(verb) == "connect"
                  ? "Bring a cold wallet online"
                  : "Take a cold wallet offline");
    auto name = std::make_shared<std::string>();
    c->add_option("name", *name, "Actor name")->required();
    bool connecting = std::string(verb) == "connect";
    c->callback([&, name, connecting] {
      Wallet& wallet = w().actor(*name).wallet;
      connecting ? wallet.connect() : wallet.disconnect();
      std::cout << *name << (connecting ? " connected" : " disconnected")
                << "\n";
      touch();
    });
  }

  {
    auto* c = wallet_cmd->add_subcommand("show", "List an actor's keys");
    auto name = std::make_shared<std::string>();
    c->add_option("name", *name, "Actor name")->required();
    c->callback([&, name] {
      CliActor& a = w().actor(*name);
      std::cout << *name << ": "
                << (a.wallet.kind() == WalletKind::Cold ? "cold" : "hot")
                << (a.wallet.connected() ? ", connected" : ", offline");
      if (!a.roles.empty()) {
        std::cout << ", roles:";
        for (const std::string& r : a.roles) std::cout << " " << r;
      }
      std::cout << "\n";
      for (const std::string& key : a.wallet.names()) {
        const WalletEntry& e = a.wallet.entry(key);
        std::cout << "  " << key << "  "
                  << (e.role == KeyRole::Master ? "master" : "sub   ") << "  "
                  << key_state_name(e.state) << "  " << to_hex(e.keypair.pub)
                  << "\n";
      }
    });
  }

  wallet_cmd->add_subcommand("list", "List all actors")->callback([&] {
    for (const auto& [name, a] : w().actors) std::cout << name << "\n";
  });

  // ----- key -----
  auto* key_cmd = app.add_subcommand("key", "Generate, derive, split keys");
  key_cmd->require_subcommand(1);

  {
    auto* c = key_cmd->add_subcommand("master", "Generate a master key");
    auto actor = std::make_shared<std::string>();
    auto name = std::make_shared<std::string>("master");
    c->add_option("actor", *actor, "Actor name")->required();
    c->add_option("--name", *name, "Key name in the wallet");
    c->callback([&, actor, name] {
      CliActor& a = w().actor(*actor);
      a.wallet.add_master(*name, generate_master(w().rng.bytes(32)));
      std::cout << *actor << "/" << *name << " "
                << to_hex(a.wallet.pub(*name)) << "\n";
      touch();
    });
  }

  {
    auto* c = key_cmd->add_subcommand("derive", "Derive a sub-key from a master");
    auto actor = std::make_shared<std::string>();
    auto label = std::make_shared<std::string>();
    auto master = std::make_shared<std::string>("master");
    auto name = std::make_shared<std::string>();
    c->add_option("actor", *actor, "Actor name")->required();
    c->add_option("label", *label, "Relationship label")->required();
    c->add_option("--master", *master, "Master key name");
    c->add_option("--name", *name, "Key name (defaults to the label)");
    c->callback([&, actor, label, master, name] {
      CliActor& a = w().actor(*actor);
      const WalletEntry& me = a.wallet.entry(*master);
      MasterKey mk;
      mk.keypair = me.keypair;
      mk.state = me.state;
      std::string key = name->empty() ? *label : *name;
      a.wallet.add_subkey(key, derive_subkey(mk, *label));
      std::cout << *actor << "/" << key << " " << to_hex(a.wallet.pub(key))
                << "\n";
      touch();
    });
  }

  {
    auto* c = key_cmd->add_subcommand("mark", "Set a key's lifecycle state");
    auto actor = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    auto state = std::make_shared<std::string>();
    c->add_option("actor", *actor, "Actor name")->required();
    c->add_option("key", *key, "Key name")->required();
    c->add_option("state", *state,
                  "Generated, Active, Lost, Compromised, Revoked, Recovered")
        ->required();
    c->callback([&, actor, key, state] {
      w().actor(*actor).wallet.set_state(*key, key_state_from_name(*state));
      std::cout << *actor << "/" << *key << " -> " << *state << "\n";
      touch();
    });
  }

  {
    auto* c = key_cmd->add_subcommand("split", "Split a key seed into shards");
    auto actor = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    auto t = std::make_shared<unsigned>(0);
    auto n = std::make_shared<unsigned>(0);
    auto out = std::make_shared<std::string>();
    c->add_option("actor", *actor, "Actor name")->required();
    c->add_option("key", *key, "Key name")->required();
    c->add_option("--threshold,-t", *t, "Shards needed to reconstruct")
        ->required();
    c->add_option("--count,-n", *n, "Total shards")->required();
    c->add_option("--out", *out, "Write shard lines to a file");
    c->callback([&, actor, key, t, n, out] {
      const WalletEntry& e = w().actor(*actor).wallet.entry(*key);
      std::vector<KeyShard> shards =
          split_secret(e.keypair.seed, *t, *n, w().rng);
      std::string text;
      for (const KeyShard& s : shards) text += shard_to_line(s) + "\n";
      if (out->empty()) {
        std::cout << text;
      } else {
        write_file(*out, text);
        std::cout << shards.size() << " shards -> " << *out << "\n";
      }
      touch();  // rng advanced
    });
  }

  {
    auto* c = key_cmd->add_subcommand("reconstruct",
                                      "Rebuild a key seed from shards");
    auto shard_lines = std::make_shared<std::vector<std::string>>();
    auto in = std::make_shared<std::string>();
    auto into = std::make_shared<std::string>();
    auto name = std::make_shared<std::string>("master");
    c->add_option("--shard", *shard_lines, "One shard line (repeatable)");
    c->add_option("--in", *in, "Read shard lines from a file");
    c->add_option("--into", *into, "Install the key into this actor's wallet");
    c->add_option("--name", *name, "Key name when installing");
    c->callback([&, shard_lines, in, into, name] {
      std::vector<KeyShard> shards;
      for (const std::string& line : *shard_lines) {
        shards.push_back(shard_from_line(line));
      }
      if (!in->empty()) {
        std::istringstream lines(read_file(*in));
        std::string line;
        while (std::getline(lines, line)) {
          if (!line.empty()) shards.push_back(shard_from_line(line));
        }
      }
      Bytes secret = reconstruct_secret(shards);
      if (into->empty()) {
        std::cout << to_hex(secret) << "\n";
      } else {
        w().actor(*into).wallet.add_master(*name, generate_master(secret));
        std::cout << *into << "/" << *name << " restored\n";
        touch();
      }
    });
  }

  // ----- did -----
  auto* did_cmd = app.add_subcommand("did", "Registry operations");
  did_cmd->require_subcommand(1);

  auto add_no_produce = [](CLI::App* c, std::shared_ptr<bool> flag) {
    c->add_flag("--no-produce", *flag,
                "Leave the transaction in the pool instead of producing a block");
  };
  auto maybe_produce = [&](bool no_produce) {
    if (!no_produce) w().ledger.produce_block();
    touch();
  };

  {
    auto* c = did_cmd->add_subcommand("register", "Register a new identifier");
    auto actor = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    auto handle = std::make_shared<std::string>();
    auto services = std::make_shared<std::vector<std::string>>();
    auto no_produce = std::make_shared<bool>(false);
    c->add_option("actor", *actor, "Actor name")->required();
    c->add_option("key", *key, "Controlling key")->required();
    c->add_option("handle", *handle, "Handle for the new did")->required();
    c->add_option("--service", *services, "name=endpoint (repeatable)");
    add_no_produce(c, no_produce);
    c->callback([&, actor, key, handle, services, no_produce] {
      DdoDraft draft;
      draft.service = parse_services(*services);
      std::string did =
          w().registry.register_did(w().actor(*actor).wallet, *key, draft,
                                    w().rng);
      w().dids[*handle] = did;
      std::cout << *handle << " = " << did << "\n";
      maybe_produce(*no_produce);
    });
  }

  {
    auto* c = did_cmd->add_subcommand("resolve", "Resolve a did to its document");
    auto ref = std::make_shared<std::string>();
    c->add_option("did", *ref, "Did or handle")->required();
    c->callback([&, ref] {
      std::cout << w().registry.resolve(w().did_of(*ref)).to_json().dump(2)
                << "\n";
    });
  }

  {
    auto* c = did_cmd->add_subcommand("dual-resolve",
                                      "Resolve two dids, both directions");
    auto a = std::make_shared<std::string>();
    auto b = std::make_shared<std::string>();
    c->add_option("a", *a, "First did or handle")->required();
    c->add_option("b", *b, "Second did or handle")->required();
    c->callback([&, a, b] {
      auto [da, db] = w().registry.dual_resolve(w().did_of(*a), w().did_of(*b));
      std::cout << da.id << " ok\n" << db.id << " ok\n";
    });
  }

  {
    auto* c = did_cmd->add_subcommand("update", "Replace document fields");
    auto actor = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    auto ref = std::make_shared<std::string>();
    auto services = std::make_shared<std::vector<std::string>>();
    auto no_produce = std::make_shared<bool>(false);
    c->add_option("actor", *actor, "Actor name")->required();
    c->add_option("key", *key, "Controlling key")->required();
    c->add_option("did", *ref, "Did or handle")->required();
    c->add_option("--service", *services, "name=endpoint (repeatable)");
    add_no_produce(c, no_produce);
    c->callback([&, actor, key, ref, services, no_produce] {
      std::string did = w().did_of(*ref);
      DidDocument doc = w().registry.resolve(did);
      if (!services->empty()) doc.service = parse_services(*services);
      Digest32 tx =
          w().registry.update_document(w().actor(*actor).wallet, *key, did,
                                       std::move(doc));
      std::cout << "updated " << did << " tx " << to_hex(tx) << "\n";
      maybe_produce(*no_produce);
    });
  }

  {
    auto* c = did_cmd->add_subcommand("delegates", "Name recovery delegates");
    auto actor = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    auto ref = std::make_shared<std::string>();
    auto delegates = std::make_shared<std::vector<std::string>>();
    auto threshold = std::make_shared<uint32_t>(0);
    auto timelock = std::make_shared<Height>(10);
    auto no_produce = std::make_shared<bool>(false);
    c->add_option("actor", *actor, "Actor name")->required();
    c->add_option("key", *key, "Controlling key")->required();
    c->add_option("did", *ref, "Did or handle")->required();
    c->add_option("--delegate", *delegates, "Delegate did or handle (repeatable)")
        ->required();
    c->add_option("--threshold", *threshold, "Approvals needed")->required();
    c->add_option("--timelock", *timelock, "Blocks between propose and finalize");
    add_no_produce(c, no_produce);
    c->callback([&, actor, key, ref, delegates, threshold, timelock,
                 no_produce] {
      std::vector<std::string> resolved;
      for (const std::string& d : *delegates) resolved.push_back(w().did_of(d));
      w().registry.set_delegates(w().actor(*actor).wallet, *key,
                                 w().did_of(*ref), resolved, *threshold,
                                 *timelock);
      std::cout << resolved.size() << " delegates, threshold " << *threshold
                << ", timelock " << *timelock << "\n";
      maybe_produce(*no_produce);
    });
  }

  {
    auto* c = did_cmd->add_subcommand("propose", "Open a recovery proposal");
    auto actor = std::make_shared<std::string>();
    auto newkey = std::make_shared<std::string>();
    auto ref = std::make_shared<std::string>();
    auto handle = std::make_shared<std::string>();
    auto no_produce = std::make_shared<bool>(false);
    c->add_option("actor", *actor, "Actor name")->required();
    c->add_option("newkey", *newkey, "Replacement key name")->required();
    c->add_option("did", *ref, "Did or handle")->required();
    c->add_option("handle", *handle, "Handle for the proposal")->required();
    add_no_produce(c, no_produce);
    c->callback([&, actor, newkey, ref, handle, no_produce] {
      std::string id = w().registry.propose_recovery(w().actor(*actor).wallet,
                                                     *newkey, w().did_of(*ref));
      w().proposals[*handle] = id;
      std::cout << *handle << " = " << id << "\n";
      maybe_produce(*no_produce);
    });
  }

  {
    auto* c = did_cmd->add_subcommand("approve", "Approve as a delegate");
    auto actor = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    auto delegate = std::make_shared<std::string>();
    auto prop = std::make_shared<std::string>();
    auto no_produce = std::make_shared<bool>(false);
    c->add_option("actor", *actor, "Actor name")->required();
    c->add_option("key", *key, "Delegate's key")->required();
    c->add_option("delegate", *delegate, "Delegate did or handle")->required();
    c->add_option("proposal", *prop, "Proposal handle or id")->required();
    add_no_produce(c, no_produce);
    c->callback([&, actor, key, delegate, prop, no_produce] {
      size_t count = w().registry.approve_recovery(
          w().actor(*actor).wallet, *key, w().did_of(*delegate),
          w().proposal_of(*prop));
      std::cout << count << " approvals\n";
      maybe_produce(*no_produce);
    });
  }

  for (const char* verb : {"finalize", "cancel"}) {
    bool finalizing = std::string(verb) == "finalize";
    auto* c = did_cmd->add_subcommand(
        verb, finalizing ? "Finalize a recovery after the timelock"
                         : "Cancel an open recovery proposal");
    auto actor = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    auto prop = std::make_shared<std::string>();
    auto no_produce = std::make_shared<bool>(false);
    c->add_option("actor", *actor, "Actor name")->required();
    c->add_option("key", *key, "Signing key")->required();
    c->add_option("proposal", *prop, "Proposal handle or id")->required();
    add_no_produce(c, no_produce);
    c->callback([&, actor, key, prop, no_produce, finalizing] {
      std::string id = w().proposal_of(*prop);
      Wallet& wallet = w().actor(*actor).wallet;
      Digest32 tx = finalizing
                        ? w().registry.finalize_recovery(wallet, *key, id)
                        : w().registry.cancel_recovery(wallet, *key, id);
      std::cout << (finalizing ? "finalized" : "cancelled") << " tx "
                << to_hex(tx) << "\n";
      maybe_produce(*no_produce);
    });
  }

  {
    auto* c = did_cmd->add_subcommand("revoke", "Revoke an identifier for good");
    auto actor = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    auto ref = std::make_shared<std::string>();
    auto no_produce = std::make_shared<bool>(false);
    c->add_option("actor", *actor, "Actor name")->required();
    c->add_option("key", *key, "Controlling key")->required();
    c->add_option("did", *ref, "Did or handle")->required();
    add_no_produce(c, no_produce);
    c->callback([&, actor, key, ref, no_produce] {
      std::string did = w().did_of(*ref);
      w().registry.revoke_did(w().actor(*actor).wallet, *key, did);
      std::cout << "revoked " << did << "\n";
      maybe_produce(*no_produce);
    });
  }

  {
    auto* c = did_cmd->add_subcommand("bind-social",
                                      "Post a signed statement on a profile");
    auto actor = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    auto ref = std::make_shared<std::string>();
    auto profile = std::make_shared<std::string>();
    auto no_produce = std::make_shared<bool>(false);
    c->add_option("actor", *actor, "Actor name")->required();
    c->add_option("key", *key, "Controlling key")->required();
    c->add_option("did", *ref, "Did or handle")->required();
    c->add_option("profile", *profile, "Profile URL")->required();
    add_no_produce(c, no_produce);
    c->callback([&, actor, key, ref, profile, no_produce] {
      SocialBinding b =
          w().registry.bind_social(w().actor(*actor).wallet, *key,
                                   w().did_of(*ref), *profile, w().social);
      std::cout << "posted " << b.post_url << "\n";
      maybe_produce(*no_produce);
    });
  }

  {
    auto* c = did_cmd->add_subcommand("verify-social",
                                      "Check a did/profile binding");
    auto ref = std::make_shared<std::string>();
    c->add_option("did", *ref, "Did or handle")->required();
    c->callback([&, ref] {
      SocialCheck check = w().registry.verify_social(w().did_of(*ref), w().social);
      std::cout << "post: " << (check.post_found ? "found" : "MISSING")
                << ", signature: " << (check.signature_valid ? "valid" : "INVALID")
                << "\n";
      if (!check.ok()) exit_code = 1;
    });
  }

  {
    auto* c = did_cmd->add_subcommand("record", "Print the registry record");
    auto ref = std::make_shared<std::string>();
    c->add_option("did", *ref, "Did or handle")->required();
    c->callback([&, ref] {
      const DidRecord& r = w().registry.record(w().did_of(*ref));
      Json j = {{"did", r.did},
                {"controller", to_hex(r.controller)},
                {"ddo_address", to_hex(r.ddo_address)},
                {"state", did_state_name(r.state)},
                {"delegates", r.delegates},
                {"threshold", r.threshold},
                {"timelock_blocks", r.timelock_blocks}};
      std::cout << j.dump(2) << "\n";
    });
  }

  // ----- cred -----
  auto* cred_cmd = app.add_subcommand("cred", "Issue, present, verify credentials");
  cred_cmd->require_subcommand(1);

  {
    auto* c = cred_cmd->add_subcommand("issue", "Issue a credential");
    auto actor = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    auto handle = std::make_shared<std::string>();
    auto issuer = std::make_shared<std::string>();
    auto holder = std::make_shared<std::string>();
    auto scheme = std::make_shared<std::string>("plain");
    auto claims = std::make_shared<std::vector<std::string>>();
    c->add_option("actor", *actor, "Issuing actor")->required();
    c->add_option("key", *key, "Issuing key")->required();
    c->add_option("handle", *handle, "Handle for the result")->required();
    c->add_option("--issuer", *issuer, "Issuer did or handle")->required();
    c->add_option("--holder", *holder, "Holder did or handle")->required();
    c->add_option("--scheme", *scheme, "plain, atomic or hashed");
    c->add_option("--claim", *claims, "name=value (repeatable)")->required();
    c->callback([&, actor, key, handle, issuer, holder, scheme, claims] {
      std::vector<Claim> parsed;
      for (const std::string& s : *claims) {
        auto [n, v] = split_pair(s, "--claim");
        parsed.push_back({n, v});
      }
      IssueResult result =
          issue(w().registry, w().actor(*actor).wallet, *key,
                w().did_of(*issuer), w().did_of(*holder), parsed,
                cred_scheme_from_name(*scheme), w().rng);
      w().creds[*handle] = issue_result_json(result);
      std::cout << *handle << ": " << result.credentials.size()
                << " credential(s)";
      for (const Credential& cr : result.credentials) {
        std::cout << " " << to_hex(cr.cred_id).substr(0, 16);
      }
      std::cout << "\n";
      touch();
    });
  }

  {
    auto* c = cred_cmd->add_subcommand("issue-predicate",
                                       "Attest a predicate over one claim");
    auto actor = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    auto handle = std::make_shared<std::string>();
    auto issuer = std::make_shared<std::string>();
    auto holder = std::make_shared<std::string>();
    auto source = std::make_shared<std::string>();
    auto predicate = std::make_shared<std::string>();
    c->add_option("actor", *actor, "Issuing actor")->required();
    c->add_option("key", *key, "Issuing key")->required();
    c->add_option("handle", *handle, "Handle for the result")->required();
    c->add_option("--issuer", *issuer, "Issuer did or handle")->required();
    c->add_option("--holder", *holder, "Holder did or handle")->required();
    c->add_option("--source", *source, "name=value the issuer knows")->required();
    c->add_option("--predicate", *predicate, "e.g. age>=18")->required();
    c->callback([&, actor, key, handle, issuer, holder, source, predicate] {
      auto [n, v] = split_pair(*source, "--source");
      Credential cred = issue_predicate(
          w().registry, w().actor(*actor).wallet, *key, w().did_of(*issuer),
          w().did_of(*holder), {n, v}, *predicate);
      IssueResult result;
      result.credentials.push_back(std::move(cred));
      w().creds[*handle] = issue_result_json(result);
      std::cout << *handle << ": "
                << to_hex(result.credentials[0].cred_id).substr(0, 16) << "\n";
      touch();
    });
  }

  {
    auto* c = cred_cmd->add_subcommand("present",
                                       "Disclose part of a hashed credential");
    auto actor = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    auto handle = std::make_shared<std::string>();
    auto cred = std::make_shared<std::string>();
    auto index = std::make_shared<size_t>(0);
    auto audience = std::make_shared<std::string>();
    auto disclose = std::make_shared<std::vector<std::string>>();
    c->add_option("actor", *actor, "Holder actor")->required();
    c->add_option("key", *key, "Holder key")->required();
    c->add_option("handle", *handle, "Handle for the presentation")->required();
    c->add_option("--credential", *cred, "Credential handle")->required();
    c->add_option("--index", *index, "Credential index within the handle");
    c->add_option("--audience", *audience, "Verifier did or handle")->required();
    c->add_option("--disclose", *disclose, "Attribute name (repeatable)");
    c->callback([&, actor, key, handle, cred, index, audience, disclose] {
      IssueResult result = w().cred_of(*cred);
      if (*index >= result.credentials.size()) {
        fail(Errc::IndexOutOfRange, "credential index out of range");
      }
      const Credential& cr = result.credentials[*index];
      std::set<std::string> names(disclose->begin(), disclose->end());
      if (names.empty()) {
        for (const SaltedAttribute& a : cr.attributes) names.insert(a.name);
      }
      Presentation p = make_presentation(w().registry, w().actor(*actor).wallet,
                                         *key, cr, result.secrets, names,
                                         w().did_of(*audience));
      w().presentations[*handle] = p.to_json();
      std::cout << *handle << ": disclosed " << p.disclosed.size() << " of "
                << cr.attributes.size() << "\n";
      touch();
    });
  }

  {
    auto* c = cred_cmd->add_subcommand("verify-presentation",
                                       "Verify a presentation end to end");
    auto pres = std::make_shared<std::string>();
    auto audience = std::make_shared<std::string>();
    c->add_option("presentation", *pres, "Presentation handle or file")
        ->required();
    c->add_option("--audience", *audience,
                  "Verifier did (defaults to the presentation's)");
    c->callback([&, pres, audience] {
      Presentation p = w().presentation_of(*pres);
      std::string aud = audience->empty() ? p.audience : w().did_of(*audience);
      PresentationReport report = verify_presentation(w().registry, p, aud);
      print_report(report);
      if (!report.valid()) exit_code = 1;
    });
  }

  {
    auto* c = cred_cmd->add_subcommand("verify", "Verify a credential directly");
    auto cred = std::make_shared<std::string>();
    auto index = std::make_shared<size_t>(0);
    c->add_option("credential", *cred, "Credential handle")->required();
    c->add_option("--index", *index, "Credential index within the handle");
    c->callback([&, cred, index] {
      IssueResult result = w().cred_of(*cred);
      if (*index >= result.credentials.size()) {
        fail(Errc::IndexOutOfRange, "credential index out of range");
      }
      PresentationReport report =
          verify_credential(w().registry, result.credentials[*index]);
      print_report(report);
      if (!report.valid()) exit_code = 1;
    });
  }

  {
    auto* c = cred_cmd->add_subcommand("revoke", "Revoke an issued credential");
    auto actor = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    auto cred = std::make_shared<std::string>();
    auto index = std::make_shared<size_t>(0);
    auto no_produce = std::make_shared<bool>(false);
    c->add_option("actor", *actor, "Issuing actor")->required();
    c->add_option("key", *key, "Issuing key")->required();
    c->add_option("credential", *cred, "Credential handle")->required();
    c->add_option("--index", *index, "Credential index within the handle");
    add_no_produce(c, no_produce);
    c->callback([&, actor, key, cred, index, no_produce] {
      IssueResult result = w().cred_of(*cred);
      if (*index >= result.credentials.size()) {
        fail(Errc::IndexOutOfRange, "credential index out of range");
      }
      revoke_credential(w().registry, w().actor(*actor).wallet, *key,
                        result.credentials[*index]);
      std::cout << "revoked " << to_hex(result.credentials[*index].cred_id)
                << "\n";
      maybe_produce(*no_produce);
    });
  }

  {
    auto* c = cred_cmd->add_subcommand("show", "Print a credential or presentation");
    auto ref = std::make_shared<std::string>();
    c->add_option("handle", *ref, "Credential or presentation handle")
        ->required();
    c->callback([&, ref] {
      if (w().creds.count(*ref)) {
        std::cout << w().creds[*ref].dump(2) << "\n";
      } else if (w().presentations.count(*ref)) {
        std::cout << w().presentations[*ref].dump(2) << "\n";
      } else {
        fail(Errc::UnresolvedReference, "unknown handle '" + *ref + "'");
      }
    });
  }

  // ----- link -----
  auto* link_cmd = app.add_subcommand("link", "Share presentations by capability token");
  link_cmd->require_subcommand(1);

  {
    auto* c = link_cmd->add_subcommand("create", "Create a share link");
    auto actor = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    auto handle = std::make_shared<std::string>();
    auto pres = std::make_shared<std::string>();
    auto expires_in = std::make_shared<Height>(0);
    auto one_off = std::make_shared<bool>(false);
    c->add_option("actor", *actor, "Holder actor")->required();
    c->add_option("key", *key, "Holder key")->required();
    c->add_option("handle", *handle, "Handle for the link")->required();
    c->add_option("--presentation", *pres, "Presentation handle or file")
        ->required();
    auto* exp_opt =
        c->add_option("--expires-in", *expires_in, "Blocks until expiry");
    auto* one_opt = c->add_flag("--one-off", *one_off, "Single use");
    exp_opt->excludes(one_opt);
    one_opt->excludes(exp_opt);
    c->callback([&, actor, key, handle, pres, expires_in, one_off, exp_opt] {
      (void)key;
      (void)actor;
      Height now = now_of();
      LinkPolicy policy;
      if (*one_off) {
        policy = OneOffPolicy{};
      } else if (exp_opt->count() > 0) {
        policy = TimeWindowPolicy{now + *expires_in};
      } else {
        fail(Errc::ParseError, "pick --expires-in or --one-off");
      }
      ShareLink link =
          w().links.create(w().presentation_of(*pres), policy, now, w().rng);
      w().tokens[*handle] = link.token;
      std::cout << *handle << " = " << link.token << "\n";
      touch();
    });
  }

  {
    auto* c = link_cmd->add_subcommand("access", "Fetch the shared presentation");
    auto ref = std::make_shared<std::string>();
    c->add_option("token", *ref, "Token or handle")->required();
    c->callback([&, ref] {
      Presentation p = w().links.access(w().token_of(*ref), now_of());
      std::cout << p.to_json().dump(2) << "\n";
      touch();  // access is logged, one-off links flip state
    });
  }

  {
    auto* c = link_cmd->add_subcommand("revoke", "Revoke a link (holder-signed)");
    auto actor = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    auto ref = std::make_shared<std::string>();
    c->add_option("actor", *actor, "Holder actor")->required();
    c->add_option("key", *key, "Holder key")->required();
    c->add_option("token", *ref, "Token or handle")->required();
    c->callback([&, actor, key, ref] {
      std::string token = w().token_of(*ref);
      Signature sig = w().actor(*actor).wallet.sign(
          *key, link_revoke_bytes(token), SignPurpose::LinkControl);
      w().links.revoke(token, sig, w().registry);
      std::cout << "revoked\n";
      touch();
    });
  }

  link_cmd->add_subcommand("purge", "Wipe content of dead links")->callback([&] {
    std::cout << w().links.purge_expired(now_of()) << " wiped\n";
    touch();
  });

  link_cmd->add_subcommand("log", "Print the access log")->callback([&] {
    for (const AccessLogEntry& e : w().links.log()) {
      std::cout << e.at << "  " << e.token << "  "
                << access_outcome_name(e.outcome) << "\n";
    }
  });

  {
    auto* c = link_cmd->add_subcommand("info", "Show a link's state");
    auto ref = std::make_shared<std::string>();
    c->add_option("token", *ref, "Token or handle")->required();
    c->callback([&, ref] {
      std::optional<ShareLink> link = w().links.info(w().token_of(*ref));
      if (!link) fail(Errc::UnknownToken, "no such link");
      std::cout << link->token << ": " << link_state_name(link->state)
                << ", created at " << link->created_at;
      if (const auto* tw = std::get_if<TimeWindowPolicy>(&link->policy)) {
        std::cout << ", expires at " << tw->expires_at;
      } else {
        std::cout << ", one-off";
      }
      std::cout << "\n";
    });
  }

  {
    auto* c = link_cmd->add_subcommand("serve", "Serve links over HTTP");
    auto host = std::make_shared<std::string>("127.0.0.1");
    c->add_option("--host", *host, "Bind address");
    c->callback([&, host] {
      ShareLinkServer server(w().links, w().registry, w().rng);
      int port = server.start(*host);
      std::cout << "listening on http://" << *host << ":" << port
                << " (Ctrl-C to stop)\n";
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      while (!g_stop) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
      }
      server.stop();
      touch();  // links may have been created or consumed over HTTP
    });
  }

  // ----- anchor -----
  auto* anchor_cmd = app.add_subcommand("anchor", "Batch digests under one root");
  anchor_cmd->require_subcommand(1);

  {
    auto* c = anchor_cmd->add_subcommand("add", "Queue content for anchoring");
    auto handle = std::make_shared<std::string>();
    auto cred = std::make_shared<std::string>();
    auto index = std::make_shared<size_t>(0);
    auto pres = std::make_shared<std::string>();
    auto text = std::make_shared<std::string>();
    c->add_option("handle", *handle, "Handle for the receipt")->required();
    c->add_option("--credential", *cred, "Credential handle");
    c->add_option("--index", *index, "Credential index within the handle");
    c->add_option("--presentation", *pres, "Presentation handle or file");
    c->add_option("--text", *text, "Anchor a literal string");
    c->callback([&, handle, cred, index, pres, text] {
      Bytes content;
      if (!cred->empty()) {
        IssueResult result = w().cred_of(*cred);
        if (*index >= result.credentials.size()) {
          fail(Errc::IndexOutOfRange, "credential index out of range");
        }
        content = str_bytes(result.credentials[*index].to_json().dump());
      } else if (!pres->empty()) {
        content = str_bytes(w().presentation_of(*pres).to_json().dump());
      } else if (!text->empty()) {
        content = str_bytes(*text);
      } else {
        fail(Errc::ParseError,
             "pick one of --credential, --presentation, --text");
      }
      w().anchor_service().add(sha256(content));
      w().receipts[*handle] = {{"content", to_hex(content)}};
      std::cout << "queued " << *handle << " ("
                << w().anchor_service().pending_count() << " pending)\n";
      touch();
    });
  }

  anchor_cmd->add_subcommand("flush", "Anchor everything pending")->callback([&] {
    // Receipts come back in add order; pair them with the handles that
    // are still waiting for one.
    std::vector<std::string> waiting;
    for (auto& [handle, j] : w().receipts) {
      if (!j.contains("receipt")) waiting.push_back(handle);
    }
    std::vector<AnchorReceipt> out = w().anchor_service().flush(w().ledger);
    if (out.size() != waiting.size()) {
      fail(Errc::IntegrityViolation, "receipt bookkeeping out of step");
    }
    for (size_t i = 0; i < out.size(); ++i) {
      w().receipts[waiting[i]]["receipt"] = out[i].to_json();
      std::cout << waiting[i] << ": root " << to_hex(out[i].root).substr(0, 16)
                << " tx " << to_hex(out[i].tx_id).substr(0, 16) << "\n";
    }
    touch();
  });

  anchor_cmd->add_subcommand("pending", "How many digests wait for a flush")
      ->callback([&] {
        std::cout << (w().anchor ? w().anchor->pending_count() : 0)
                  << " pending\n";
      });

  {
    auto* c = anchor_cmd->add_subcommand("verify", "Check content against a receipt");
    auto handle = std::make_shared<std::string>();
    auto tamper = std::make_shared<bool>(false);
    c->add_option("handle", *handle, "Receipt handle")->required();
    c->add_flag("--tamper", *tamper, "Flip a byte first (expect failure)");
    c->callback([&, handle, tamper] {
      auto it = w().receipts.find(*handle);
      if (it == w().receipts.end() || !it->second.contains("receipt")) {
        fail(Errc::UnresolvedReference,
             "no flushed receipt for '" + *handle + "'");
      }
      Bytes content = from_hex(it->second.at("content").get<std::string>());
      if (*tamper) content.push_back('!');
      AnchorReceipt receipt = AnchorReceipt::from_json(it->second.at("receipt"));
      AnchorCheck check = verify_anchored(content, receipt, w().ledger);
      if (check.ok) {
        std::cout << "anchored at height " << receipt.anchored_at << "\n";
      } else {
        std::cout << "NOT VERIFIED: " << check.reason << "\n";
        exit_code = 1;
      }
    });
  }

  {
    auto* c = anchor_cmd->add_subcommand("show", "Print a receipt as JSON");
    auto handle = std::make_shared<std::string>();
    c->add_option("handle", *handle, "Receipt handle")->required();
    c->callback([&, handle] {
      auto it = w().receipts.find(*handle);
      if (it == w().receipts.end()) {
        fail(Errc::UnresolvedReference, "unknown receipt '" + *handle + "'");
      }
      std::cout << it->second.dump(2) << "\n";
    });
  }

  // ----- run / check -----
  {
    auto* c = app.add_subcommand("run", "Run a scenario file in a fresh world");
    auto path = std::make_shared<std::string>();
    auto transcript_out = std::make_shared<std::string>();
    auto tables_path = std::make_shared<std::string>();
    c->add_option("scenario", *path, "Scenario JSON file")->required();
    c->add_option("--transcript", *transcript_out, "Write the transcript here");
    c->add_option("--tables", *tables_path, "Lifecycle tables file");
    c->callback([&, path, transcript_out, tables_path] {
      Json scenario = Json::parse(read_file(*path));
      ScenarioRunner runner(seed);
      Transcript t = runner.run(scenario);
      for (const TranscriptStep& s : t.steps) {
        std::cout << "[" << s.index << "] " << s.action << " -> " << s.outcome;
        if (s.outcome != s.expect) std::cout << " (expected " << s.expect << ")";
        std::cout << "\n";
      }
      LifecycleTables tables = LifecycleTables::load_file(
          tables_path->empty() ? LifecycleTables::default_path()
                               : *tables_path);
      LifecycleReport lifecycle = lifecycle_check(t, tables);
      for (const std::string& v : lifecycle.violations) {
        std::cout << "lifecycle: " << v << "\n";
      }
      if (!transcript_out->empty()) {
        write_file(*transcript_out, t.to_json().dump(2));
      }
      std::cout << "ledger digest " << t.final_ledger_digest << "\n";
      if (!t.all_matched) {
        std::cout << "MISMATCH at step " << t.first_mismatch << "\n";
        exit_code = 1;
      } else if (!lifecycle.ok()) {
        std::cout << "LIFECYCLE VIOLATIONS\n";
        exit_code = 1;
      } else {
        std::cout << "all " << t.steps.size() << " expectations met\n";
      }
    });
  }

  {
    auto* c = app.add_subcommand("check", "Re-check a saved transcript");
    auto path = std::make_shared<std::string>();
    auto tables_path = std::make_shared<std::string>();
    c->add_option("transcript", *path, "Transcript JSON file")->required();
    c->add_option("--tables", *tables_path, "Lifecycle tables file");
    c->callback([&, path, tables_path] {
      Transcript t = Transcript::from_json(Json::parse(read_file(*path)));
      LifecycleTables tables = LifecycleTables::load_file(
          tables_path->empty() ? LifecycleTables::default_path()
                               : *tables_path);
      LifecycleReport lifecycle = lifecycle_check(t, tables);
      for (const std::string& v : lifecycle.violations) {
        std::cout << "lifecycle: " << v << "\n";
      }
      if (t.all_matched && lifecycle.ok()) {
        std::cout << "transcript ok (" << t.steps.size() << " steps, "
                  << t.lifecycle.size() << " lifecycle events)\n";
      } else {
        if (!t.all_matched) {
          std::cout << "MISMATCH at step " << t.first_mismatch << "\n";
        }
        exit_code = 1;
      }
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const SsiError& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
    return (e.code() == Errc::ParseError ||
            e.code() == Errc::UnresolvedReference)
               ? 2
               : 1;
  } catch (const Json::exception& e) {
    std::cerr << "error: ParseError: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (world && dirty) world->save();
  return exit_code;
}
