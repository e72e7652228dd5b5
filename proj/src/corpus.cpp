#include "obp/corpus.hpp"

#include <fstream>

#include "obp/partition.hpp"
#include "obp/rng.hpp"

namespace obp {

namespace {
constexpr const char* kVersion = "0.1.0";

[[noreturn]] void bad_config(const std::string& where, const std::string& what) {
  fail(Error::Code::parse_error, "config entry " + where + ": " + what);
}

LabelSequence resolve_sequence(const nlohmann::json& sj, const std::string& where) {
  try {
    std::string type = sj.at("type").get<std::string>();
    if (type == "random_read_k") {
      auto s = random_read_k_sequence(sj.at("n").get<int>(), sj.at("k").get<int>(), sj.at("seed").get<uint64_t>());
      return {s.support_size(), s.elems()};
    }
    if (type == "identity_read_once") {
      int n = sj.at("n").get<int>();
      LabelSequence s;
      s.n = n;
      for (int v = 0; v < n; ++v) s.elems.push_back(v);
      return s;
    }
    if (type == "two_pass_reversal") {
      int n = sj.at("n").get<int>();
      LabelSequence s;
      s.n = n;
      for (int v = 0; v < n; ++v) s.elems.push_back(v);
      for (int v = n; v-- > 0;) s.elems.push_back(v);
      return s;
    }
    if (type == "k_pass") {
      auto s = k_pass_sequence(sj.at("n").get<int>(), sj.at("k").get<int>(), sj.at("seed").get<uint64_t>());
      return {s.support_size(), s.elems()};
    }
    if (type == "random_general") {
      int n = sj.at("n").get<int>();
      int64_t length = sj.at("length").get<int64_t>();
      Rng rng(sj.at("seed").get<uint64_t>());
      LabelSequence s;
      s.n = n;
      for (int64_t i = 0; i < length; ++i) s.elems.push_back((int)rng.below((uint64_t)n));
      return s;
    }
    if (type == "explicit") {
      LabelSequence s;
      s.n = sj.at("n").get<int>();
      for (int v : sj.at("elems").get<std::vector<int>>()) s.elems.push_back(v - 1);
      s.counts();
      return s;
    }
    bad_config(where, "unknown sequence type: " + type);
  } catch (const nlohmann::json::exception& e) {
    bad_config(where, std::string("sequence: ") + e.what());
  }
}

int read_multiplicity_or_fail(const LabelSequence& s, const std::string& where) {
  auto counts = s.counts();
  int k = 0;
  for (int c : counts) k = std::max(k, c);
  for (int c : counts)
    if (c != k) bad_config(where, "sequence is not exactly read-k; use a linear_length generator");
  if (k == 0) bad_config(where, "empty sequence");
  return k;
}

std::shared_ptr<BitGenerator> resolve_generator(const nlohmann::json& gj, const LabelSequence& seq,
                                                const std::string& where) {
  try {
    std::string kind = gj.at("kind").get<std::string>();
    if (kind == "uniform") return std::make_shared<UniformGenerator>(seq.n);
    InwMode mode = inw_mode_from(gj.at("mode").get<std::string>());
    int w = gj.at("w").get<int>();
    double eps = gj.at("eps").get<double>();
    if (kind == "read_k") {
      int k = read_multiplicity_or_fail(seq, where);
      auto s = ReadKSequence::validate(seq.elems, seq.n, k);
      return std::make_shared<CompositeDescriptor>(CompositeDescriptor::build_read_k(s, w, eps, mode));
    }
    if (kind == "linear_length")
      return std::make_shared<CompositeDescriptor>(CompositeDescriptor::build_linear_length(seq, w, eps, mode));
    bad_config(where, "unknown generator kind: " + kind);
  } catch (const nlohmann::json::exception& e) {
    bad_config(where, std::string("generator: ") + e.what());
  }
}

}  // namespace

nlohmann::json CorpusConfig::to_json() const {
  nlohmann::json j;
  j["version"] = version.empty() ? kVersion : version;
  j["rng_seed"] = rng_seed;
  j["threads"] = threads;
  j["caps"] = {{"input", caps.input_cap}, {"seed", caps.seed_cap}};
  j["entries"] = entries;
  return j;
}

CorpusConfig CorpusConfig::from_json(const nlohmann::json& j) {
  try {
    CorpusConfig cfg;
    cfg.version = j.value("version", kVersion);
    cfg.rng_seed = j.value("rng_seed", (uint64_t)1);
    cfg.threads = j.value("threads", 1);
    if (j.contains("caps")) {
      cfg.caps.input_cap = j.at("caps").value("input", 24);
      cfg.caps.seed_cap = j.at("caps").value("seed", 26);
    }
    if (j.contains("entries")) {
      if (!j.at("entries").is_array()) fail(Error::Code::parse_error, "config field 'entries' must be an array");
      cfg.entries = j.at("entries");
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    fail(Error::Code::parse_error, std::string("bad corpus config: ") + e.what());
  }
}

ResolvedEntry resolve_entry(const nlohmann::json& e, const CorpusConfig& cfg, size_t index) {
  std::string id = e.value("id", "entry" + std::to_string(index));
  const std::string where = "'" + id + "'";
  try {
    const auto& pj = e.at("program");
    std::string ptype = pj.at("type").get<std::string>();

    LabelSequence seq;
    std::optional<ObliviousProgram> program;
    if (ptype == "address") {
      int n_addr = pj.at("n_addr").get<int>();
      program = pad_to_exact_k(build_address_function(n_addr));
      seq = read_profile(*program).labels;
    } else {
      seq = resolve_sequence(e.at("sequence"), where);
      if (ptype == "random") {
        program = random_obp(seq, pj.at("w").get<int>(), pj.at("seed").get<uint64_t>());
      } else if (ptype == "mod_counter") {
        program = build_mod_counter(seq, pj.at("q").get<int>(), pj.at("target").get<int>());
      } else if (ptype == "restricted_random") {
        // random program over the full sequence, then the top `extra`
        // variables are fixed to seeded bits; the generator sees the
        // restricted sequence with densely relabeled variables
        int extra = pj.at("extra").get<int>();
        if (extra < 1 || extra >= seq.n) bad_config(where, "restricted_random needs 0 < extra < n");
        auto big = random_obp(seq, pj.at("w").get<int>(), pj.at("seed").get<uint64_t>());
        Rng rng(derive_seed(pj.at("seed").get<uint64_t>(), 0x5e5));
        Restriction r;
        for (int v = seq.n - extra; v < seq.n; ++v) r.vars.push_back(v);
        r.values = Bits::random((size_t)extra, rng);
        program = restrict_program(big, r);
        LabelSequence cut;
        cut.n = seq.n - extra;
        for (int v : seq.elems)
          if (v < cut.n) cut.elems.push_back(v);
        seq = std::move(cut);
      } else {
        bad_config(where, "unknown program type: " + ptype);
      }
    }

    ResolvedEntry out{id, std::move(*program), resolve_generator(e.at("generator"), seq, where), true, 0, 0.0};
    if (e.at("generator").contains("eps")) out.eps_bound = e.at("generator").at("eps").get<double>();
    const auto& mj = e.at("method");
    std::string mtype = mj.at("type").get<std::string>();
    if (mtype == "exact") {
      out.exact = true;
    } else if (mtype == "sampled") {
      out.exact = false;
      out.samples = mj.at("samples").get<uint64_t>();
    } else {
      bad_config(where, "unknown method type: " + mtype);
    }
    (void)cfg;
    return out;
  } catch (const nlohmann::json::exception& ex) {
    bad_config(where, ex.what());
  }
}

CorpusOutcome run_corpus(const CorpusConfig& cfg, const std::filesystem::path& out_dir) {
  CorpusOutcome outcome;
  for (size_t i = 0; i < cfg.entries.size(); ++i) {
    ResolvedEntry entry = resolve_entry(cfg.entries[i], cfg, i);
    FoolingReport rep;
    if (entry.exact) {
      rep = exact_fooling_error(entry.program, *entry.generator, cfg.caps, cfg.threads, entry.eps_bound);
      if (entry.eps_bound > 0 && rep.error_estimate > entry.eps_bound) ++outcome.bound_exceedances;
    } else {
      uint64_t seed = derive_seed(cfg.rng_seed, 7000 + i);
      rep = sampled_fooling_error(entry.program, *entry.generator, entry.samples, seed, cfg.caps, cfg.threads,
                                  entry.eps_bound);
    }
    outcome.reports.push_back({entry.id, rep});
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir / "details");
    nlohmann::json cj = cfg.to_json();
    {
      std::ofstream out(out_dir / "run_config.json");
      if (!out) fail(Error::Code::io_error, "cannot write " + (out_dir / "run_config.json").string());
      out << cj.dump(2) << "\n";
    }
    {
      std::ofstream out(out_dir / "reports.csv");
      if (!out) fail(Error::Code::io_error, "cannot write " + (out_dir / "reports.csv").string());
      out << "# obpgen " << kVersion << "\n";
      out << "# config " << cj.dump() << "\n";
      out << fooling_report_csv_header() << "\n";
      for (const auto& [id, rep] : outcome.reports) out << fooling_report_csv_row(id, rep) << "\n";
    }
    for (const auto& [id, rep] : outcome.reports) {
      nlohmann::json dj;
      dj["version"] = kVersion;
      dj["config"] = cj;
      dj["id"] = id;
      dj["report"] = fooling_report_to_json(rep);
      std::ofstream out(out_dir / "details" / (id + ".json"));
      if (!out) fail(Error::Code::io_error, "cannot write detail file for " + id);
      out << dj.dump(2) << "\n";
    }
  }
  return outcome;
}

nlohmann::json regression_corpus_entries(int random_programs, InwMode mode, bool exact, uint64_t samples) {
  nlohmann::json entries = nlohmann::json::array();
  nlohmann::json gen = {{"kind", "read_k"}, {"mode", name(mode)}, {"w", 4}, {"eps", 0.1}};
  nlohmann::json method =
      exact ? nlohmann::json{{"type", "exact"}} : nlohmann::json{{"type", "sampled"}, {"samples", samples}};
  for (int i = 1; i <= random_programs; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "r%02d", i);
    entries.push_back({{"id", id},
                       {"sequence", {{"type", "random_read_k"}, {"n", 8}, {"k", 2}, {"seed", i}}},
                       {"program", {{"type", "random"}, {"w", 4}, {"seed", 100 + i}}},
                       {"generator", gen},
                       {"method", method}});
  }
  entries.push_back({{"id", "parity"},
                     {"sequence", {{"type", "identity_read_once"}, {"n", 8}}},
                     {"program", {{"type", "mod_counter"}, {"q", 2}, {"target", 1}}},
                     {"generator", gen},
                     {"method", method}});
  entries.push_back({{"id", "mod3"},
                     {"sequence", {{"type", "two_pass_reversal"}, {"n", 8}}},
                     {"program", {{"type", "mod_counter"}, {"q", 3}, {"target", 1}}},
                     {"generator", gen},
                     {"method", method}});
  return entries;
}

CorpusConfig demo_corpus_config(uint64_t rng_seed) {
  CorpusConfig cfg;
  cfg.version = kVersion;
  cfg.rng_seed = rng_seed;
  cfg.entries = regression_corpus_entries(5, InwMode::toy, true, 0);
  cfg.entries.push_back({{"id", "addr4"},
                         {"program", {{"type", "address"}, {"n_addr", 4}}},
                         {"generator", {{"kind", "read_k"}, {"mode", "toy"}, {"w", 4}, {"eps", 0.1}}},
                         {"method", {{"type", "exact"}}}});
  cfg.entries.push_back({{"id", "restr"},
                         {"sequence", {{"type", "random_read_k"}, {"n", 10}, {"k", 2}, {"seed", 77}}},
                         {"program", {{"type", "restricted_random"}, {"w", 4}, {"extra", 2}, {"seed", 177}}},
                         {"generator", {{"kind", "read_k"}, {"mode", "toy"}, {"w", 4}, {"eps", 0.1}}},
                         {"method", {{"type", "exact"}}}});
  cfg.entries.push_back({{"id", "lin16"},
                         {"sequence", {{"type", "random_general"}, {"n", 16}, {"length", 48}, {"seed", 5}}},
                         {"program", {{"type", "random"}, {"w", 3}, {"seed", 505}}},
                         {"generator", {{"kind", "linear_length"}, {"mode", "toy"}, {"w", 4}, {"eps", 0.1}}},
                         {"method", {{"type", "exact"}}}});
  return cfg;
}

}  // namespace obp
