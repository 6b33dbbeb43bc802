#pragma once

#include <array>
#include <memory>

#include "ssi/anchor.hpp"
#include "ssi/credentials.hpp"
#include "ssi/share_links.hpp"

namespace ssi {

struct LifecycleEvent {
  std::string kind;  // "key", "did", "credential"
  std::string id;
  std::string from;  // empty on creation
  std::string to;
  size_t step = 0;
};

struct TranscriptStep {
  size_t index = 0;
  std::string action;
  std::string expect;
  std::string outcome;
  Height height = 0;  // ledger height after the step
};

/// Full record of one scenario run. Two runs of the same scenario with
/// the same seed serialize to identical bytes.
struct Transcript {
  std::string scenario;
  uint64_t seed = 0;
  std::vector<TranscriptStep> steps;
  std::vector<LifecycleEvent> lifecycle;
  std::string final_ledger_digest;
  bool all_matched = true;
  // Valid when !all_matched; index of the step that went sideways.
  size_t first_mismatch = 0;

  Json to_json() const;
  static Transcript from_json(const Json& j);
};

/// Legal state machines, loaded from data so they can evolve without
/// recompiling. Unknown transitions are violations, not extensions.
struct LifecycleTables {
  struct Machine {
    std::set<std::string> initial;
    std::map<std::string, std::set<std::string>> transitions;
  };
  std::map<std::string, Machine> machines;

  static LifecycleTables from_json(const Json& j);
  static LifecycleTables load_file(const std::string& path);
  static const char* default_path();
};

struct LifecycleReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

LifecycleReport lifecycle_check(const Transcript& transcript,
                                const LifecycleTables& tables);

/// The twelve pattern names the toolkit exercises.
extern const std::array<const char*, 12> kPatternNames;

/// Which patterns a scenario touches, judged from its steps.
std::set<std::string> scenario_patterns(const Json& scenario);

/// Drives a whole cast of actors (wallets, DIDs, credentials, links,
/// anchors) through the steps of a scenario file. Every step carries
/// an "expect" field; execution tracks expected against actual and a
/// mismatch ends the run with all_matched = false. References between
/// steps go through string handles ("as": "alice_did").
class ScenarioRunner {
 public:
  explicit ScenarioRunner(uint64_t seed);
  ~ScenarioRunner();

  Transcript run(const Json& scenario);
  Transcript run_file(const std::string& path);

  // Post-run inspection, used by tests.
  Ledger& ledger();
  LinkService& links();
  const std::map<std::string, std::string>& dids() const;

 private:
  struct World;
  std::unique_ptr<World> world_;
};

}  // namespace ssi
