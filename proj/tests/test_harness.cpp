#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "obp/corpus.hpp"

using namespace obp;

namespace {

LabelSequence identity_order(int n) {
  LabelSequence s;
  s.n = n;
  for (int v = 0; v < n; ++v) s.elems.push_back(v);
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("constant programs have zero fooling error against anything") {
  auto b = build_mod_counter(identity_order(6), 1, 0);
  auto g = CompositeDescriptor::build_read_k(ReadKSequence::validate(identity_order(6).elems, 6, 1), 4, 0.1,
                                             InwMode::toy);
  auto rep = exact_fooling_error(b, g);
  CHECK(rep.error.is_zero());
  CHECK(rep.uniform_acceptance == Dyadic::one());
}

TEST_CASE("uniform mode has exactly zero error") {
  for (uint64_t i = 0; i < 10; ++i) {
    auto seq = random_read_k_sequence(7, 2, 650 + i);
    auto b = random_obp(LabelSequence{7, seq.elems()}, 3, 651 + i);
    UniformGenerator g(7);
    auto rep = exact_fooling_error(b, g);
    CHECK(rep.error.is_zero());
  }
}

TEST_CASE("toy regression values at n = 6, frozen from double enumeration") {
  auto g = CompositeDescriptor::build_read_k(ReadKSequence::validate(identity_order(6).elems, 6, 1), 4, 0.1,
                                             InwMode::toy);
  auto parity = exact_fooling_error(build_mod_counter(identity_order(6), 2, 1), g);
  CHECK(parity.uniform_acceptance == Dyadic::ratio(1, 1));
  CHECK(parity.error == Dyadic::zero());

  auto mod3 = exact_fooling_error(build_mod_counter(identity_order(6), 3, 1), g);
  CHECK(mod3.uniform_acceptance == Dyadic::parse("21/2^6"));
  CHECK(mod3.generator_acceptance == Dyadic::parse("9/2^5"));
  CHECK(mod3.error == Dyadic::parse("3/2^6"));
}

TEST_CASE("error is within [0,1] and symmetric") {
  for (uint64_t i = 0; i < 10; ++i) {
    auto seq = random_read_k_sequence(6, 2, 800 + i);
    auto b = random_obp(LabelSequence{6, seq.elems()}, 4, 801 + i);
    auto g = CompositeDescriptor::build_read_k(ReadKSequence::validate(seq.elems(), 6, 2), 4, 0.1, InwMode::toy);
    auto rep = exact_fooling_error(b, g);
    CHECK(rep.error <= Dyadic::one());
    CHECK(rep.error == abs_diff(rep.generator_acceptance, rep.uniform_acceptance));
  }
}

TEST_CASE("exhaustive caps route to sampling") {
  auto seq = random_read_k_sequence(8, 2, 12);
  auto b = random_obp(LabelSequence{8, seq.elems()}, 3, 13);
  auto g = CompositeDescriptor::build_read_k(ReadKSequence::validate(seq.elems(), 8, 2), 4, 0.1, InwMode::hash);
  CHECK_THROWS_AS(exact_fooling_error(b, g, Caps{8, 26}), Error);  // seed too long for the cap
  CHECK_THROWS_AS(exact_fooling_error(b, g, Caps{4, 2000}), Error);  // n above the input cap
  CHECK_THROWS_AS(sampled_fooling_error(b, g, 100, 1), Error);       // too few samples
}

TEST_CASE("sampled error on uniform mode sits inside its confidence interval") {
  auto seq = random_read_k_sequence(10, 2, 21);
  auto b = random_obp(LabelSequence{10, seq.elems()}, 4, 22);
  UniformGenerator g(10);
  auto rep = sampled_fooling_error(b, g, 200'000, 99);
  CHECK(rep.error_estimate <= rep.ci_half_width);

  auto rep2 = sampled_fooling_error(b, g, 200'000, 99);
  CHECK(rep.generator_estimate == rep2.generator_estimate);  // deterministic in the seed

  auto rep_threaded = sampled_fooling_error(b, g, 200'000, 99, Caps{}, 3);
  CHECK(rep.generator_estimate == rep_threaded.generator_estimate);  // thread count never matters
}

TEST_CASE("doubling samples shrinks the confidence interval like 1/sqrt(2)") {
  auto seq = random_read_k_sequence(8, 2, 31);
  auto b = random_obp(LabelSequence{8, seq.elems()}, 4, 32);
  UniformGenerator g(8);
  auto a = sampled_fooling_error(b, g, 100'000, 5);
  auto c = sampled_fooling_error(b, g, 200'000, 5);
  double shrink = c.ci_half_width / a.ci_half_width;
  CHECK(shrink > 0.6);
  CHECK(shrink < 0.81);
}

TEST_CASE("hybrid inequality: uniform D gives zero on both sides") {
  auto seq = random_read_k_sequence(8, 2, 41);
  auto b = random_obp(LabelSequence{8, seq.elems()}, 3, 42);
  std::vector<int> y{1, 3, 4};
  auto d = EnumDistribution::uniform(3);
  auto dp = EnumDistribution::biased_product(5, 1, 2);
  auto rep = hybrid_check(b, y, d, dp);
  CHECK(rep.holds);
  CHECK(rep.product_gap.is_zero());
  CHECK(rep.max_restricted_gap.is_zero());
}

TEST_CASE("hybrid inequality holds on random instances") {
  for (uint64_t i = 0; i < 30; ++i) {
    auto seq = random_read_k_sequence(8, 2, 5100 + i);
    auto b = random_obp(LabelSequence{8, seq.elems()}, 4, 5200 + i);
    Rng rng(5300 + i);
    int m = 1 + (int)rng.below(7);
    std::vector<int> vars(8);
    for (int v = 0; v < 8; ++v) vars[v] = v;
    rng.shuffle(vars);
    std::vector<int> y(vars.begin(), vars.begin() + m);
    auto d = EnumDistribution::from_generator(InwDescriptor::build(m, 2, 4, 0.25, InwMode::toy));
    auto dp = EnumDistribution::biased_product(8 - m, 3, 2);
    auto rep = hybrid_check(b, y, d, dp);
    CHECK(rep.holds);
  }
}

TEST_CASE("hybrid with Y covering everything reduces to the plain fooling error") {
  auto seq = random_read_k_sequence(7, 2, 61);
  auto b = random_obp(LabelSequence{7, seq.elems()}, 3, 62);
  std::vector<int> y(7);
  for (int v = 0; v < 7; ++v) y[v] = v;
  auto gen = CompositeDescriptor::build_read_k(ReadKSequence::validate(seq.elems(), 7, 2), 4, 0.1, InwMode::toy);
  auto d = EnumDistribution::from_generator(gen);
  auto dp = EnumDistribution::uniform(0);
  auto rep = hybrid_check(b, y, d, dp);
  auto fool = exact_fooling_error(b, gen);
  CHECK(rep.product_gap == fool.error);
  CHECK(rep.max_restricted_gap == fool.error);
  CHECK(rep.holds);
}

TEST_CASE("structural suite is green at k = 2 and k = 3") {
  auto s2 = structural_suite(3, 2);
  CHECK(s2.all_pass());
  for (const auto& p : s2.properties) CHECK(p.instances > 0);
  auto s3 = structural_suite(3, 3);
  CHECK(s3.all_pass());
}

TEST_CASE("negative controls turn the suite red with a counterexample") {
  auto broken = structural_suite(3, 2, SuiteMutation::interleaving_accept_all);
  CHECK(!broken.all_pass());
  bool found = false;
  for (const auto& p : broken.properties)
    if (!p.pass) {
      CHECK(!p.counterexample.empty());
      found = true;
    }
  CHECK(found);

  auto tight = structural_suite(3, 2, SuiteMutation::visit_bound_halved);
  CHECK(!tight.all_pass());
}

TEST_CASE("sampled lemma checks on structured k = 3 instances") {
  int qualified = 0;
  for (uint64_t i = 0; i < 150; ++i) {
    auto s = random_structured_sequence(16, 3, 7700 + i);
    if (!is_per_read_monotone(s).ok || !is_k_regularly_interleaving(s).ok) continue;
    ++qualified;
    CHECK(head_visit_profile(s).max_visits <= 6);
    auto dirs = is_per_read_monotone(s).directions;
    bool all_inc = true;
    for (auto d : dirs) all_inc = all_inc && d == Direction::increasing;
    if (all_inc)
      for (size_t p = 0; p + 1 < s.length(); ++p) {
        int a = s.rank_of(s.elems()[p]), b = s.rank_of(s.elems()[p + 1]);
        if (b > a) CHECK(b == a + 1);
      }
  }
  CHECK(qualified >= 100);
}

TEST_CASE("empty corpus succeeds with no reports") {
  CorpusConfig cfg;
  cfg.rng_seed = 5;
  auto outcome = run_corpus(cfg, {});
  CHECK(outcome.reports.empty());
  CHECK(outcome.bound_exceedances == 0);
}

TEST_CASE("corpus runs are reproducible byte for byte") {
  auto base = std::filesystem::temp_directory_path() / "obp_corpus_test";
  std::filesystem::remove_all(base);
  CorpusConfig cfg = demo_corpus_config(2024);
  cfg.entries.erase(cfg.entries.begin() + 2, cfg.entries.end() - 1);  // keep it quick
  run_corpus(cfg, base / "a");
  run_corpus(cfg, base / "b");
  for (const char* rel : {"run_config.json", "reports.csv"})
    CHECK(slurp(base / "a" / rel) == slurp(base / "b" / rel));

  // the embedded config reproduces the run exactly
  std::ifstream in(base / "a" / "run_config.json");
  nlohmann::json cj;
  in >> cj;
  auto cfg2 = CorpusConfig::from_json(cj);
  run_corpus(cfg2, base / "c");
  CHECK(slurp(base / "a" / "reports.csv") == slurp(base / "c" / "reports.csv"));
  for (const auto& e : std::filesystem::directory_iterator(base / "a" / "details"))
    CHECK(slurp(e.path()) == slurp(base / "c" / "details" / e.path().filename()));
}

TEST_CASE("corpus config errors carry the entry id") {
  CorpusConfig cfg;
  cfg.entries.push_back({{"id", "broken"},
                         {"sequence", {{"type", "no_such"}, {"n", 4}}},
                         {"program", {{"type", "random"}, {"w", 3}, {"seed", 1}}},
                         {"generator", {{"kind", "uniform"}}},
                         {"method", {{"type", "exact"}}}});
  try {
    run_corpus(cfg, {});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("broken") != std::string::npos);
  }
}

TEST_CASE("shrinking keeps the failure and reduces the support") {
  // plant a failure: sequences whose pair (1,2) rejects
  auto fails = [](const ReadKSequence& s) { return !is_k_regularly_interleaving(s).ok; };
  auto s = ReadKSequence::validate({0, 1, 0, 2, 1, 2, 3, 3}, 4, 2);
  REQUIRE(fails(s));
  auto small = shrink_counterexample(s, fails);
  CHECK(fails(small));
  CHECK(small.support_size() <= 3);
}
