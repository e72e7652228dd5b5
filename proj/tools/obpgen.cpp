// Command-line front end: analyze and partition read-k sequences, build
// generator descriptors, measure fooling errors, run the verification suite.
// Exit codes: 0 success, 1 property or bound failure, 2 usage/parse error.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "obp/composite.hpp"
#include "obp/corpus.hpp"
#include "obp/expander.hpp"
#include "obp/fooling.hpp"
#include "obp/partition.hpp"

namespace fs = std::filesystem;
using namespace obp;

namespace {

constexpr const char* kVersion = "obpgen 0.1.0";

nlohmann::json provenance(const std::string& command, const nlohmann::json& params) {
  return {{"version", kVersion}, {"command", command}, {"params", params}};
}

void write_json_file(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) fail(Error::Code::io_error, "cannot write " + path.string());
  out << j.dump(2) << "\n";
}

std::string dirs_str(const std::vector<Direction>& dirs) {
  std::string s = "[";
  for (size_t i = 0; i < dirs.size(); ++i) s += std::string(i ? "," : "") + name(dirs[i]);
  return s + "]";
}

int cmd_analyze(const fs::path& file, const std::string& format) {
  ReadKSequence s = read_sequence_file(file);
  auto mono = is_per_read_monotone(s);
  auto inter = is_k_regularly_interleaving(s);
  auto prof = head_visit_profile(s);
  auto part = partition_variables(s);

  if (format == "structured") {
    nlohmann::json j;
    j["provenance"] = provenance("analyze", {{"file", file.string()}});
    j["n"] = s.support_size();
    j["k"] = s.k();
    j["per_read_monotone"] = mono.ok;
    if (mono.ok) {
      j["directions"] = nlohmann::json::array();
      for (auto d : mono.directions) j["directions"].push_back(name(d));
    } else {
      j["monotone_witness"] = {{"read", mono.witness->read},
                               {"earlier_var", mono.witness->earlier_var + 1},
                               {"later_var", mono.witness->later_var + 1}};
    }
    j["k_regularly_interleaving"] = inter.ok;
    j["max_visits"] = prof.max_visits;
    j["partition_t"] = part.t();
    j["k_pass_path"] = part.k_pass_path;
    if (mono.ok) {
      auto dec = monotone_decomposition(s);
      j["segments"] = nlohmann::json::array();
      for (const auto& seg : dec.segments)
        j["segments"].push_back(
            {{"begin", seg.begin}, {"end", seg.end}, {"direction", name(seg.dir)}, {"first_read", seg.first_read}});
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  std::cout << "sequence: n=" << s.support_size() << " k=" << s.k() << " length=" << s.length() << "\n";
  if (mono.ok) {
    std::cout << "per-read-monotone: yes " << dirs_str(mono.directions) << "\n";
    auto dec = monotone_decomposition(s);
    std::cout << "monotone decomposition: " << dec.segments.size() << " segment(s):";
    for (const auto& seg : dec.segments)
      std::cout << " [" << seg.begin << "," << seg.end << ") " << name(seg.dir) << " from read " << seg.first_read
                << ";";
    std::cout << "\n";
  } else {
    std::cout << "per-read-monotone: no (read " << mono.witness->read << ", vars " << mono.witness->earlier_var + 1
              << " then " << mono.witness->later_var + 1 << ")\n";
  }
  std::cout << "k-regularly-interleaving: " << (inter.ok ? "yes" : "no");
  if (!inter.ok) {
    const auto& p = inter.pairs.back();
    std::cout << " (pair " << p.read_i << "," << p.read_j << " rejects at position " << p.report.witness->position
              << ")";
  }
  std::cout << "\n";
  std::cout << "head visits (identity tape): max=" << prof.max_visits << " per-cell [";
  for (size_t c = 0; c < prof.visits.size(); ++c) std::cout << (c ? "," : "") << prof.visits[c];
  std::cout << "]\n";
  std::cout << "partition: t=" << part.t() << (part.k_pass_path ? " (k-pass fast path)" : " (general path)") << "\n";
  return 0;
}

int cmd_partition(const fs::path& file, const std::string& out_file) {
  ReadKSequence s = read_sequence_file(file);
  auto part = partition_variables(s);
  verify_partition(s, part);

  int n = s.support_size(), k = s.k();
  double envelope = std::exp((double)k * k) * std::pow((double)n, 1.0 - 1.0 / std::pow(2.0, k - 1));
  double ratio = (double)part.t() / std::sqrt((double)n);

  nlohmann::json j;
  j["provenance"] = provenance("partition", {{"file", file.string()}});
  j["n"] = n;
  j["k"] = k;
  j["t"] = part.t();
  j["k_pass_path"] = part.k_pass_path;
  j["t_envelope_general"] = envelope;  // exp(k^2) n^(1-1/2^(k-1)), reported not asserted
  j["t_over_sqrt_n"] = ratio;
  auto& parts = j["parts"] = nlohmann::json::array();
  for (const auto& p : part.parts) {
    nlohmann::json pj;
    pj["vars"] = nlohmann::json::array();
    for (int v : p.vars) pj["vars"].push_back(v + 1);
    pj["directions"] = nlohmann::json::array();
    for (auto d : p.directions) pj["directions"].push_back(name(d));
    auto& blocks = pj["interleaving_blocks"] = nlohmann::json::array();
    for (const auto& pr : p.interleaving.pairs) {
      nlohmann::json bj;
      bj["pair"] = {pr.read_i, pr.read_j};
      bj["blocks"] = nlohmann::json::array();
      for (const auto& b : pr.report.blocks) {
        nlohmann::json vb = nlohmann::json::array();
        for (int v : b.vars) vb.push_back(v + 1);
        bj["blocks"].push_back(vb);
      }
      blocks.push_back(std::move(bj));
    }
    parts.push_back(std::move(pj));
  }

  std::cout << "n=" << n << " k=" << k << " t=" << part.t() << " t/sqrt(n)=" << ratio
            << (part.k_pass_path ? " (k-pass fast path)" : " (general path)") << "\n";
  if (!out_file.empty()) {
    write_json_file(out_file, j);
    std::cout << "partition written to " << out_file << "\n";
  } else {
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_build_gen(const std::string& kind, const fs::path& seq_file, const std::string& mode, int w, double eps,
                  const std::string& out_file) {
  CompositeDescriptor g = [&] {
    if (kind == "read_k") return CompositeDescriptor::build_read_k(read_sequence_file(seq_file), w, eps,
                                                                   inw_mode_from(mode));
    if (kind == "linear_length")
      return CompositeDescriptor::build_linear_length(read_label_sequence_file(seq_file), w, eps,
                                                      inw_mode_from(mode));
    fail(Error::Code::invalid_params, "kind must be read_k or linear_length");
  }();
  auto rep = g.seed_report();
  std::cout << g.id() << "\n";
  std::cout << "seed length s=" << rep.total << " parts t=" << rep.t << " frequent=" << rep.frequent_bits << "\n";
  std::cout << "per-part seed lengths:";
  for (auto s : rep.part_seed_lengths) std::cout << " " << s;
  std::cout << "\nenvelope t*log2(n)*(log2(n/eps)+k*log2(w)) = " << rep.envelope << "\n";
  if (!out_file.empty()) {
    nlohmann::json j = g.to_json();
    j["provenance"] = provenance("build-gen", {{"kind", kind},
                                               {"file", seq_file.string()},
                                               {"mode", mode},
                                               {"w", w},
                                               {"eps", eps}});
    write_json_file(out_file, j);
    std::cout << "descriptor written to " << out_file << "\n";
  }
  return 0;
}

int cmd_fool(const fs::path& program_file, const fs::path& gen_file, bool exact, uint64_t samples, uint64_t rng_seed,
             int threads, int input_cap, int seed_cap, const std::string& out_file) {
  ObliviousProgram b = read_program_file(program_file);
  std::ifstream in(gen_file);
  if (!in) fail(Error::Code::io_error, "cannot open " + gen_file.string());
  nlohmann::json gj;
  try {
    in >> gj;
  } catch (const nlohmann::json::exception& e) {
    fail(Error::Code::parse_error, gen_file.string() + ": " + e.what());
  }
  std::shared_ptr<BitGenerator> g;
  std::string type = gj.value("type", "");
  double eps_bound = 0;
  if (type == "composite") {
    auto d = CompositeDescriptor::from_json(gj);
    eps_bound = d.eps();
    g = std::make_shared<CompositeDescriptor>(std::move(d));
  } else if (type == "inw") {
    auto d = InwDescriptor::from_json(gj);
    eps_bound = d.eps();
    g = std::make_shared<InwDescriptor>(std::move(d));
  } else if (type == "uniform") {
    g = std::make_shared<UniformGenerator>(gj.at("n").get<int64_t>());
  } else {
    fail(Error::Code::parse_error, gen_file.string() + ": unknown descriptor type '" + type + "'");
  }

  Caps caps{input_cap, seed_cap};
  FoolingReport rep;
  if (exact) {
    rep = exact_fooling_error(b, *g, caps, threads, eps_bound);
    std::cout << "uniform acceptance  " << rep.uniform_acceptance.to_string() << " = " << rep.uniform_estimate
              << "\n";
    std::cout << "generator acceptance " << rep.generator_acceptance.to_string() << " = " << rep.generator_estimate
              << "\n";
    std::cout << "exact fooling error " << rep.error.to_string() << " = " << rep.error_estimate << "\n";
  } else {
    rep = sampled_fooling_error(b, *g, samples, rng_seed, caps, threads, eps_bound);
    std::cout << "uniform acceptance  " << rep.uniform_estimate << (rep.uniform_exact ? " (exact)" : " (sampled)")
              << "\n";
    std::cout << "generator estimate  " << rep.generator_estimate << " +- " << rep.ci_half_width << " (99% CI)\n";
    std::cout << "error estimate      " << rep.error_estimate << "\n";
    if (rep.bound_inside_ci) std::cout << "note: eps bound lies inside the confidence interval\n";
  }
  std::cout << "runtime " << rep.runtime_seconds << " s\n";
  if (!out_file.empty()) {
    nlohmann::json j;
    j["provenance"] = provenance("fool", {{"program", program_file.string()},
                                          {"generator", gen_file.string()},
                                          {"exact", exact},
                                          {"samples", samples},
                                          {"rng_seed", rng_seed},
                                          {"input_cap", input_cap},
                                          {"seed_cap", seed_cap}});
    j["report"] = fooling_report_to_json(rep);
    write_json_file(out_file, j);
  }
  if (exact && eps_bound > 0 && rep.error_estimate > eps_bound) {
    std::cout << "FAIL: exact error exceeds the descriptor bound eps=" << eps_bound << "\n";
    return 1;
  }
  return 0;
}

int cmd_suite(int n_max, int k, uint64_t rng_seed, int threads, const std::string& out_dir,
              const std::string& mutate) {
  SuiteMutation mut = SuiteMutation::none;
  if (mutate == "interleaving") mut = SuiteMutation::interleaving_accept_all;
  else if (mutate == "visits") mut = SuiteMutation::visit_bound_halved;
  else if (!mutate.empty()) fail(Error::Code::invalid_params, "unknown mutation: " + mutate);

  bool all_ok = true;
  nlohmann::json summary;
  summary["provenance"] = provenance(
      "suite", {{"n_max", n_max}, {"k", k}, {"rng_seed", rng_seed}, {"mutate", mutate}});

  auto structural = structural_suite(n_max, k, mut);
  summary["structural"] = structural.to_json();
  for (const auto& p : structural.properties) {
    std::cout << (p.pass ? "PASS " : "FAIL ") << structural.name << " " << p.name << " (" << p.instances
              << " instances)";
    if (!p.pass) std::cout << " counterexample: " << p.counterexample;
    std::cout << "\n";
    all_ok = all_ok && p.pass;
  }

  // hybrid battery: random programs, toy generator marginal on a random subset
  int hybrid_trials = 100, hybrid_fail = 0;
  for (int t = 0; t < hybrid_trials; ++t) {
    uint64_t seed = derive_seed(rng_seed, 900 + t);
    Rng rng(seed);
    auto seq = random_read_k_sequence(8, 2, derive_seed(seed, 1));
    LabelSequence ls{8, seq.elems()};
    auto prog = random_obp(ls, 4, derive_seed(seed, 2));
    int m = 1 + (int)rng.below(7);
    std::vector<int> vars(8);
    for (int i = 0; i < 8; ++i) vars[i] = i;
    rng.shuffle(vars);
    std::vector<int> y(vars.begin(), vars.begin() + m);
    auto d = EnumDistribution::from_generator(InwDescriptor::build(m, 2, 4, 0.25, InwMode::toy));
    auto dp = EnumDistribution::biased_product(8 - m, 1, 2);
    if (!hybrid_check(prog, y, d, dp).holds) ++hybrid_fail;
  }
  std::cout << (hybrid_fail == 0 ? "PASS " : "FAIL ") << "hybrid-inequality (" << hybrid_trials << " instances)\n";
  summary["hybrid"] = {{"trials", hybrid_trials}, {"failures", hybrid_fail}};
  all_ok = all_ok && hybrid_fail == 0;

  // a small corpus run
  CorpusConfig cfg = demo_corpus_config(rng_seed);
  cfg.threads = threads;
  auto outcome = run_corpus(cfg, out_dir.empty() ? fs::path{} : fs::path(out_dir) / "corpus");
  std::cout << "PASS corpus (" << outcome.reports.size() << " entries, " << outcome.bound_exceedances
            << " bound exceedances)\n";
  summary["corpus"] = {{"entries", outcome.reports.size()}, {"bound_exceedances", outcome.bound_exceedances}};

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_json_file(fs::path(out_dir) / "suite.json", summary);
  }
  std::cout << (all_ok ? "suite: all green\n" : "suite: FAILURES\n");
  return all_ok ? 0 : 1;
}

int cmd_demo(const std::string& out_dir, uint64_t rng_seed) {
  fs::path dir(out_dir);
  fs::create_directories(dir);

  // sample sequence files
  write_sequence_file(dir / "updown.seq", ReadKSequence::validate({0, 1, 2, 2, 1, 0}, 3, 2));
  std::vector<int> rev(8);
  for (int i = 0; i < 8; ++i) rev[i] = 7 - i;
  write_sequence_file(dir / "twopass_reversal.seq", two_pass_sequence(8, rev));
  std::cout << "wrote sample sequences\n";

  ReadKSequence s = read_sequence_file(dir / "twopass_reversal.seq");
  auto part = partition_variables(s);
  std::cout << "two-pass reversal partitions into t=" << part.t() << " part(s)\n";

  auto g = CompositeDescriptor::build_read_k(s, 4, 0.1, InwMode::toy);
  write_json_file(dir / "gen_toy.json", g.to_json());
  std::cout << "built " << g.id() << "\n";

  auto addr = pad_to_exact_k(build_address_function(4));
  write_program_file(dir / "address4.json", addr);
  auto addr_gen = CompositeDescriptor::build_read_k(*read_sequence_if_exact(addr), 4, 0.1, InwMode::toy);
  auto rep = exact_fooling_error(addr, addr_gen);
  std::cout << "address function vs toy generator: exact error " << rep.error.to_string() << " = "
            << rep.error_estimate << "\n";

  CorpusConfig cfg = demo_corpus_config(rng_seed);
  auto outcome = run_corpus(cfg, dir / "corpus");
  std::cout << "corpus: " << outcome.reports.size() << " entries written under " << (dir / "corpus").string()
            << "\n";
  std::cout << "second eigenvalue of the 8x8 grid expander: " << measured_second_eigenvalue(3) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generators and exact verification for oblivious read-k branching programs"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string seq_file, format = "text", out_file, out_dir, kind = "read_k", mode = "expander", mutate;
  std::string program_file, gen_file;
  int w = 4, n_max = 4, k = 2, threads = 1, input_cap = 24, seed_cap = 26;
  double eps = 0.1;
  uint64_t samples = 1'000'000, rng_seed = 1;
  bool exact = false;

  auto* analyze = app.add_subcommand("analyze", "structural report for a sequence file");
  analyze->add_option("file", seq_file, "sequence file")->required();
  analyze->add_option("--format", format, "text or structured");

  auto* partition = app.add_subcommand("partition", "variable partition with certificates");
  partition->add_option("file", seq_file, "sequence file")->required();
  partition->add_option("-o,--out", out_file, "write the partition as JSON");

  auto* build = app.add_subcommand("build-gen", "build a composite generator descriptor");
  build->add_option("file", seq_file, "sequence file")->required();
  build->add_option("--kind", kind, "read_k or linear_length");
  build->add_option("--mode", mode, "expander, hash, toy or uniform");
  build->add_option("--w", w, "width the generator must fool");
  build->add_option("--eps", eps, "error budget");
  build->add_option("-o,--out", out_file, "write the descriptor as JSON");

  auto* fool = app.add_subcommand("fool", "measure the fooling error of a generator against a program");
  fool->add_option("--program", program_file, "program JSON file")->required();
  fool->add_option("--generator", gen_file, "descriptor JSON file")->required();
  fool->add_flag("--exact", exact, "exhaustive over inputs and seeds");
  fool->add_option("--samples", samples, "sample count for the sampled method");
  fool->add_option("--rng-seed", rng_seed, "sampling seed");
  fool->add_option("--threads", threads, "worker threads");
  fool->add_option("--input-cap", input_cap, "exhaustive input cap (bits)");
  fool->add_option("--seed-cap", seed_cap, "exhaustive seed cap (bits)");
  fool->add_option("-o,--out", out_file, "write the report as JSON");

  auto* suite = app.add_subcommand("suite", "structural suites, hybrid battery and a corpus run");
  suite->add_option("--n-max", n_max, "largest support size for exhaustive enumeration");
  suite->add_option("--k", k, "read multiplicity for the structural suite");
  suite->add_option("--rng-seed", rng_seed, "seed for the randomized batteries");
  suite->add_option("--threads", threads, "worker threads");
  suite->add_option("--out", out_dir, "directory for machine-readable results");
  suite->add_option("--mutate", mutate, "negative control: interleaving or visits");

  auto* demo = app.add_subcommand("demo", "end-to-end walkthrough into a directory");
  demo->add_option("--out", out_dir, "output directory")->required();
  demo->add_option("--rng-seed", rng_seed, "seed");

  try {
    app.parse(argc, argv);
    if (analyze->parsed()) return cmd_analyze(seq_file, format);
    if (partition->parsed()) return cmd_partition(seq_file, out_file);
    if (build->parsed()) return cmd_build_gen(kind, seq_file, mode, w, eps, out_file);
    if (fool->parsed())
      return cmd_fool(program_file, gen_file, exact, samples, rng_seed, threads, input_cap, seed_cap, out_file);
    if (suite->parsed()) return cmd_suite(n_max, k, rng_seed, threads, out_dir, mutate);
    if (demo->parsed()) return cmd_demo(out_dir, rng_seed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
