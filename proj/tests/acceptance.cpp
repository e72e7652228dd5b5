// Acceptance suite: every criterion below is checked at its pinned tolerance
// and prints exactly one PASS/FAIL line. Exit code 0 only if all pass.
//
// Run with --print-baseline to regenerate the frozen exact-error table used
// by criterion 4.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "obp/corpus.hpp"
#include "obp/partition.hpp"

using namespace obp;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int threads() { return std::max(1, std::min(4, (int)std::thread::hardware_concurrency())); }

// ---- criterion 4 frozen baselines (regenerate with --print-baseline) ----
struct Baseline {
  const char* id;
  const char* error;
};
const Baseline kToyExactBaselines[] = {
    {"r01", "0/2^0"},
};
const bool kBaselinesFrozen = false;  // flipped to true once the table is filled in

// 1. Exhaustive structural battery over all read-2 sequences, n = 3 and 4.
void criterion_1() {
  auto t0 = Clock::now();
  auto suite = structural_suite(4, 2);
  bool pass = suite.all_pass();
  std::string detail;
  uint64_t greedy_instances = 0;
  for (const auto& p : suite.properties) {
    if (p.name == "greedy-interleaving-matches-exhaustive") greedy_instances = p.instances;
    if (!p.pass) detail += p.name + " failed on " + p.counterexample + "; ";
  }
  // 1 + 6 + 90 + 2520 sequences over support sizes 1..4
  if (greedy_instances != 2617) {
    pass = false;
    detail += "expected 2617 greedy cross-checks, ran " + std::to_string(greedy_instances) + "; ";
  }
  double dt = elapsed(t0);
  if (dt >= 60.0) {
    pass = false;
    detail += "runtime " + std::to_string(dt) + " s exceeds 60 s";
  }
  report(1, "exhaustive structural suite (90 + 2520 read-2 sequences)", pass,
         "checkers vs oracle, visit bound 4, adjacent steps; " + std::to_string(dt).substr(0, 5) + " s");
}

// 2. Partition soundness on 1000 random read-k sequences.
void criterion_2() {
  int done = 0, failures = 0;
  std::string first_failure;
  const int combos[6][2] = {{2, 16}, {2, 64}, {2, 256}, {3, 16}, {3, 64}, {3, 256}};
  for (int c = 0; c < 6; ++c) {
    int quota = c < 4 ? 167 : 166;
    for (int i = 0; i < quota; ++i, ++done) {
      auto s = random_read_k_sequence(combos[c][1], combos[c][0], derive_seed(0xACC2, done));
      try {
        auto p = partition_variables(s);
        verify_partition(s, p);  // re-derives every certificate from scratch
      } catch (const Error& e) {
        ++failures;
        if (first_failure.empty()) first_failure = e.what();
      }
    }
  }
  report(2, "partition soundness on 1000 random read-k sequences", failures == 0,
         std::to_string(done) + " partitions, " + std::to_string(failures) + " failures" +
             (first_failure.empty() ? "" : ": " + first_failure));
}

// 3. Partition quality on the two-pass fast path at n = 10^4.
void criterion_3() {
  const int n = 10'000;
  const double bound = 3.0 * std::sqrt((double)n);
  size_t worst = 0;
  int violations = 0;
  std::vector<int> perm(n);
  for (int trial = 0; trial < 100; ++trial) {
    for (int v = 0; v < n; ++v) perm[v] = v;
    Rng rng(derive_seed(0xACC3, trial));
    rng.shuffle(perm);
    auto p = partition_variables(two_pass_sequence(n, perm));
    worst = std::max(worst, p.t());
    if ((double)p.t() > bound) ++violations;
  }
  for (int v = 0; v < n; ++v) perm[v] = n - 1 - v;
  auto rev = partition_variables(two_pass_sequence(n, perm));
  bool pass = violations == 0 && rev.t() == 1;
  report(3, "two-pass partition quality at n = 10^4", pass,
         "worst t = " + std::to_string(worst) + " <= " + std::to_string((int)bound) +
             " over 100 permutations; reversal t = " + std::to_string(rev.t()));
}

// 4. Exact toy-mode regression corpus against frozen baselines.
void criterion_4(bool print_baseline) {
  auto t0 = Clock::now();
  CorpusConfig cfg;
  cfg.rng_seed = 1;
  cfg.threads = threads();
  cfg.entries = regression_corpus_entries(50, InwMode::toy, true, 0);
  auto outcome = run_corpus(cfg, {});

  if (print_baseline) {
    std::printf("const Baseline kToyExactBaselines[] = {\n");
    for (const auto& [id, rep] : outcome.reports)
      std::printf("    {\"%s\", \"%s\"},\n", id.c_str(), rep.error.to_string().c_str());
    std::printf("};\n");
    return;
  }

  bool pass = true;
  std::string detail;
  size_t nb = sizeof(kToyExactBaselines) / sizeof(kToyExactBaselines[0]);
  if (!kBaselinesFrozen || nb != outcome.reports.size()) {
    pass = false;
    detail = "baseline table not frozen";
  } else {
    for (size_t i = 0; i < nb; ++i) {
      const auto& [id, rep] = outcome.reports[i];
      if (id != kToyExactBaselines[i].id || rep.error != Dyadic::parse(kToyExactBaselines[i].error)) {
        pass = false;
        detail += id + ": got " + rep.error.to_string() + ", frozen " + kToyExactBaselines[i].error + "; ";
      }
    }
  }
  double dt = elapsed(t0);
  if (dt >= 300.0) {
    pass = false;
    detail += "runtime " + std::to_string(dt) + " s exceeds 5 min";
  }
  report(4, "exact toy regression corpus (52 programs, all seeds enumerated)", pass,
         detail.empty() ? std::to_string(dt).substr(0, 5) + " s, all values match the frozen table" : detail);
}

// 5. Hash-mode fooling bound at eps = 0.1, 10^6 sampled seeds.
void criterion_5() {
  CorpusConfig cfg;
  cfg.rng_seed = 20240810;
  cfg.threads = threads();
  cfg.entries = regression_corpus_entries(50, InwMode::hash, false, 1'000'000);
  auto outcome = run_corpus(cfg, {});
  int clear = 0;
  bool read_once_clear = true;
  double worst = 0;
  for (const auto& [id, rep] : outcome.reports) {
    bool ok = rep.error_estimate + rep.ci_half_width <= 0.1;
    clear += ok;
    worst = std::max(worst, rep.error_estimate + rep.ci_half_width);
    if (!ok && id == "parity") read_once_clear = false;  // the read-once entry
  }
  int needed = (int)std::ceil(0.95 * (double)outcome.reports.size());
  bool pass = clear >= needed && read_once_clear;
  report(5, "hash-mode fooling bound eps = 0.1 at 10^6 seeds", pass,
         std::to_string(clear) + "/" + std::to_string(outcome.reports.size()) +
             " CI-clear (need >= " + std::to_string(needed) + "), worst err+ci = " + std::to_string(worst) +
             ", read-once clear = " + (read_once_clear ? "yes" : "NO"));
}

// 6. Exact hybrid inequality on 100 seeded instances at n = 8.
void criterion_6() {
  int failures = 0;
  for (int t = 0; t < 100; ++t) {
    uint64_t seed = derive_seed(0xACC6, t);
    Rng rng(seed);
    auto seq = random_read_k_sequence(8, 2, derive_seed(seed, 1));
    auto prog = random_obp(LabelSequence{8, seq.elems()}, 4, derive_seed(seed, 2));
    int m = 1 + (int)rng.below(7);
    std::vector<int> vars(8);
    for (int i = 0; i < 8; ++i) vars[i] = i;
    rng.shuffle(vars);
    std::vector<int> y(vars.begin(), vars.begin() + m);
    auto d = EnumDistribution::from_generator(InwDescriptor::build(m, 2, 4, 0.25, InwMode::toy));
    auto dp = EnumDistribution::biased_product(8 - m, 1 + (int)rng.below(3), 2);
    if (!hybrid_check(prog, y, d, dp).holds) ++failures;
  }
  report(6, "hybrid inequality exact on 100 instances at n = 8", failures == 0,
         std::to_string(failures) + " violations");
}

// 7. Restriction merge identity, exhaustive at n = 10.
void criterion_7() {
  int failures = 0;
  for (int t = 0; t < 100; ++t) {
    uint64_t seed = derive_seed(0xACC7, t);
    auto seq = random_read_k_sequence(10, 2, derive_seed(seed, 1));
    auto b = random_obp(LabelSequence{10, seq.elems()}, 4, derive_seed(seed, 2));
    Rng rng(derive_seed(seed, 3));
    Restriction r;
    for (int v = 0; v < 10; ++v)
      if (rng.coin()) r.vars.push_back(v);
    r.values = Bits::random(r.vars.size(), rng);
    auto rb = restrict_program(b, r);
    int free_n = 10 - (int)r.vars.size();
    for (uint64_t y = 0; y < (uint64_t{1} << free_n); ++y) {
      Bits yb = Bits::from_u64(y, (size_t)free_n);
      if (rb.evaluate(yb) != b.evaluate(merge_assignment(10, r, yb))) {
        ++failures;
        break;
      }
    }
  }
  report(7, "restriction merge identity exhaustive on 100 programs at n = 10", failures == 0,
         std::to_string(failures) + " programs disagreed");
}

double fit_exponent(const std::vector<double>& log2n, const std::vector<double>& log2s) {
  double mx = 0, my = 0;
  for (size_t i = 0; i < log2n.size(); ++i) {
    mx += log2n[i];
    my += log2s[i];
  }
  mx /= (double)log2n.size();
  my /= (double)log2s.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < log2n.size(); ++i) {
    num += (log2n[i] - mx) * (log2s[i] - my);
    den += (log2n[i] - mx) * (log2n[i] - mx);
  }
  return num / den;
}

// 8. Seed-length scaling for both composite constructions.
void criterion_8() {
  // 8a: read-k layout on two-pass inputs, n = 2^8 .. 2^14. The fit is on the
  // constant-word-per-level instantiation; the expander instantiation adds
  // its budget factor and is reported alongside.
  std::vector<double> xs, ys_toy, ys_exp;
  for (int e = 8; e <= 14; ++e) {
    int n = 1 << e;
    double s_toy = 0, s_exp = 0;
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<int> perm(n);
      for (int v = 0; v < n; ++v) perm[v] = v;
      Rng rng(derive_seed(0xACC8, 10 * e + trial));
      rng.shuffle(perm);
      auto s = two_pass_sequence(n, perm);
      s_toy += (double)CompositeDescriptor::build_read_k(s, 4, 0.1, InwMode::toy).seed_length();
      s_exp += (double)CompositeDescriptor::build_read_k(s, 4, 0.1, InwMode::expander).seed_length();
    }
    xs.push_back(e);
    ys_toy.push_back(std::log2(s_toy / 3));
    ys_exp.push_back(std::log2(s_exp / 3));
  }
  double exp_toy = fit_exponent(xs, ys_toy);
  double exp_exp = fit_exponent(xs, ys_exp);
  bool pass_a = exp_toy >= 0.4 && exp_toy <= 0.7;
  report(8, "read-k seed scaling fit on two-pass inputs, n = 2^8..2^14", pass_a,
         "fit exponent " + std::to_string(exp_toy) + " in [0.4, 0.7] (expander instantiation: " +
             std::to_string(exp_exp) + ", its budget term adds ~log^2 n)");

  // 8b: linear-length s/n strictly decreasing over n = 2^8 .. 2^16 for the
  // half-frequent family (one full pass, then four passes over the lower
  // half), which keeps the partition on the fast path across the read-bound
  // jump at n = 2^16.
  bool pass_b = true;
  std::string detail;
  for (InwMode mode : {InwMode::expander, InwMode::toy}) {
    double prev = 1e300;
    for (int e = 8; e <= 16; ++e) {
      int n = 1 << e;
      LabelSequence s;
      s.n = n;
      for (int v = 0; v < n; ++v) s.elems.push_back(v);
      for (int r = 0; r < 4; ++r)
        for (int v = 0; v < n / 2; ++v) s.elems.push_back(v);
      auto g = CompositeDescriptor::build_linear_length(s, 4, 0.1, mode);
      double ratio = (double)g.seed_length() / n;
      if (ratio >= prev) {
        pass_b = false;
        detail += std::string(name(mode)) + " s/n not decreasing at n=2^" + std::to_string(e) + "; ";
      }
      prev = ratio;
      if (e == 16)
        detail += std::string(name(mode)) + " s/n(2^16) = " + std::to_string(ratio) + "; ";
    }
  }
  report(8, "linear-length s/n strictly decreasing, n = 2^8..2^16 (c = 3)", pass_b, detail);
}

// 9. Byte-exact reproducibility from the embedded run config.
void criterion_9() {
  auto base = fs::temp_directory_path() / "obp_acceptance_runs";
  fs::remove_all(base);
  CorpusConfig cfg = demo_corpus_config(97);
  cfg.threads = threads();
  run_corpus(cfg, base / "a");

  std::ifstream in(base / "a" / "run_config.json");
  nlohmann::json cj;
  in >> cj;
  auto cfg2 = CorpusConfig::from_json(cj);
  run_corpus(cfg2, base / "b");

  auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  bool pass = true;
  std::string detail;
  int files = 0;
  for (const auto& e : fs::recursive_directory_iterator(base / "a")) {
    if (!e.is_regular_file()) continue;
    ++files;
    fs::path rel = fs::relative(e.path(), base / "a");
    if (slurp(e.path()) != slurp(base / "b" / rel)) {
      pass = false;
      detail += rel.string() + " differs; ";
    }
  }
  report(9, "byte-exact reproduction from the embedded run config", pass && files >= 3,
         std::to_string(files) + " files compared" + (detail.empty() ? "" : "; " + detail));
}

}  // namespace

int main(int argc, char** argv) {
  bool print_baseline = argc > 1 && std::strcmp(argv[1], "--print-baseline") == 0;
  if (print_baseline) {
    criterion_4(true);
    return 0;
  }
  auto t0 = Clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4(false);
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  std::printf("%s: %d criterion failure(s), %.1f s total\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              g_failures, elapsed(t0));
  return g_failures == 0 ? 0 : 1;
}
