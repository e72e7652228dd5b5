#pragma once

#include <filesystem>
#include <memory>

#include "obp/composite.hpp"
#include "obp/fooling.hpp"
#include "obp/suites.hpp"

namespace obp {

// A corpus run is a list of (program, generator, method) entries described in
// JSON, resolved deterministically from the embedded rng seed. Output files
// are a pure function of the config, so re-running reproduces them byte for
// byte.
struct CorpusConfig {
  std::string version;
  uint64_t rng_seed = 1;
  int threads = 1;
  Caps caps;
  nlohmann::json entries = nlohmann::json::array();

  nlohmann::json to_json() const;
  static CorpusConfig from_json(const nlohmann::json& j);
};

struct ResolvedEntry {
  std::string id;
  ObliviousProgram program;
  std::shared_ptr<BitGenerator> generator;
  bool exact = true;
  uint64_t samples = 0;
  double eps_bound = 0;
};

ResolvedEntry resolve_entry(const nlohmann::json& e, const CorpusConfig& cfg, size_t index);

struct CorpusOutcome {
  std::vector<std::pair<std::string, FoolingReport>> reports;
  int bound_exceedances = 0;  // exact entries whose error exceeded their eps
};

// Runs every entry and, when out_dir is nonempty, writes run_config.json,
// reports.csv and details/<id>.json under it.
CorpusOutcome run_corpus(const CorpusConfig& cfg, const std::filesystem::path& out_dir);

// The fixed desk-scale regression corpus: `random_programs` seeded random
// width-4 read-2 programs on random read-2 sequences over 8 variables, plus
// a parity program on the identity read-once order and a mod-3 counter on
// the two-pass reversal order.
nlohmann::json regression_corpus_entries(int random_programs, InwMode mode, bool exact, uint64_t samples);

CorpusConfig demo_corpus_config(uint64_t rng_seed);

}  // namespace obp
