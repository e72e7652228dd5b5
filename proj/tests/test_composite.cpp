#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "obp/composite.hpp"
#include "obp/suites.hpp"

using namespace obp;

TEST_CASE("read-once monotone order collapses to one mixing generator") {
  auto s = ReadKSequence::validate({0, 1, 2, 3}, 4, 1);
  auto g = CompositeDescriptor::build_read_k(s, 4, 0.1, InwMode::toy);
  CHECK(g.parts().size() == 1);
  CHECK(g.parts()[0].inw.d() == 2);
  CHECK(g.seed_length() == g.parts()[0].inw.seed_length());
}

TEST_CASE("single variable any k") {
  auto s = ReadKSequence::validate({0, 0, 0}, 1, 3);
  auto g = CompositeDescriptor::build_read_k(s, 4, 0.1, InwMode::toy);
  CHECK(g.parts().size() == 1);
  CHECK(g.seed_length() == 1);
  CHECK(g.expand(Bits::parse("1")) == Bits::parse("1"));
}

TEST_CASE("two-pass reversal keeps one part with visit bound 4") {
  std::vector<int> rev(8);
  for (int i = 0; i < 8; ++i) rev[i] = 7 - i;
  auto s = two_pass_sequence(8, rev);
  auto g = CompositeDescriptor::build_read_k(s, 4, 0.1, InwMode::toy);
  CHECK(g.parts().size() == 1);
  CHECK(g.parts()[0].inw.d() == 4);
  CHECK(g.seed_length() == g.parts()[0].inw.seed_length());
}

TEST_CASE("seed segments are disjoint, ordered by smallest variable, and sum to s") {
  for (uint64_t i = 0; i < 25; ++i) {
    auto s = random_read_k_sequence(9, 2, 2200 + i);
    auto g = CompositeDescriptor::build_read_k(s, 4, 0.1, InwMode::toy);
    auto rep = g.seed_report();
    int64_t acc = 0;
    int prev_min = -1;
    for (size_t p = 0; p < g.parts().size(); ++p) {
      CHECK(g.parts()[p].seed_offset == acc);
      acc += g.parts()[p].inw.seed_length();
      CHECK(g.parts()[p].vars.front() > prev_min);
      prev_min = g.parts()[p].vars.front();
    }
    CHECK(acc == g.seed_length());
    CHECK(rep.total == g.seed_length());
    CHECK((int)rep.part_seed_lengths.size() == rep.t);
  }
}

TEST_CASE("coordinates in a part depend only on that part's segment") {
  // (1, 3, 0, 2) read once: parts {1, 3} and {0, 2}
  auto s = ReadKSequence::validate({1, 3, 0, 2}, 4, 1);
  auto g = CompositeDescriptor::build_read_k(s, 4, 0.1, InwMode::toy);
  REQUIRE(g.parts().size() == 2);
  int64_t slen = g.seed_length();
  REQUIRE(slen <= 22);
  const auto& p0 = g.parts()[0];
  std::vector<uint8_t> in_p0(4, 0);
  for (int v : p0.vars) in_p0[v] = 1;
  for (uint64_t seed = 0; seed < (uint64_t{1} << slen); ++seed) {
    Bits sb = Bits::from_u64(seed, (size_t)slen);
    Bits base = g.expand(sb);
    for (int64_t bit = p0.seed_offset; bit < p0.seed_offset + p0.inw.seed_length(); ++bit) {
      Bits flipped = sb;
      flipped.flip((size_t)bit);
      Bits out = g.expand(flipped);
      for (int v = 0; v < 4; ++v)
        if (!in_p0[v]) REQUIRE(out.get(v) == base.get(v));
    }
  }
}

TEST_CASE("uniform parts give the uniform output distribution") {
  auto s = random_read_k_sequence(6, 2, 77);
  auto g = CompositeDescriptor::build_read_k(s, 4, 0.1, InwMode::uniform);
  CHECK(g.seed_length() == 6);
  std::vector<int> hist(64, 0);
  for (uint64_t seed = 0; seed < 64; ++seed) ++hist[g.expand(Bits::from_u64(seed, 6)).to_u64()];
  for (int c : hist) CHECK(c == 1);
}

TEST_CASE("parts satisfy the full precondition chain") {
  for (uint64_t i = 0; i < 20; ++i) {
    auto s = random_read_k_sequence(8, 3, 3100 + i);
    auto g = CompositeDescriptor::build_read_k(s, 4, 0.1, InwMode::toy);
    for (const auto& p : g.parts()) {
      auto r = s.restricted(p.vars);
      CHECK(is_per_read_monotone(r).ok);
      CHECK(is_k_regularly_interleaving(r).ok);
      CHECK(head_visit_profile(r).max_visits <= 2 * s.k());
    }
    CHECK(g.parts().size() <= 8);  // t <= n, so the error budget t*(eps/n) stays under eps
  }
}

TEST_CASE("linear length read bound") {
  CHECK(linear_length_read_bound(16) == 1);
  CHECK(linear_length_read_bound(256) == 1);
  CHECK(linear_length_read_bound(1 << 16) == 2);
  CHECK_THROWS_AS(linear_length_read_bound(3), Error);
}

TEST_CASE("read-once input reduces to the read-k construction") {
  LabelSequence s;
  s.n = 8;
  for (int v = 0; v < 8; ++v) s.elems.push_back(v);
  auto g = CompositeDescriptor::build_linear_length(s, 4, 0.1, InwMode::toy);
  CHECK(g.frequent_vars().empty());
  CHECK(g.kind() == CompositeKind::linear_length);
  auto gk = CompositeDescriptor::build_read_k(ReadKSequence::validate(s.elems, 8, 1), 4, 0.1, InwMode::toy);
  CHECK(g.seed_length() == gk.seed_length());
}

TEST_CASE("one hot variable goes through its own seed bit") {
  // n = 16, one variable read 6 times, the others once: threshold k(16) = 1
  LabelSequence s;
  s.n = 16;
  for (int r = 0; r < 6; ++r) s.elems.push_back(5);
  for (int v = 0; v < 16; ++v)
    if (v != 5) s.elems.push_back(v);
  auto g = CompositeDescriptor::build_linear_length(s, 4, 0.1, InwMode::toy);
  REQUIRE(g.frequent_vars() == std::vector<int>{5});
  int64_t fbit = g.frequent_offset();
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    Bits seed = Bits::random((size_t)g.seed_length(), rng);
    Bits out = g.expand(seed);
    CHECK(out.get(5) == seed.get((size_t)fbit));
    Bits flipped = seed;
    flipped.flip((size_t)fbit);
    Bits out2 = g.expand(flipped);
    CHECK(out2.get(5) != out.get(5));
  }
}

TEST_CASE("frequent set obeys the counting bound on random linear inputs") {
  for (uint64_t i = 0; i < 10; ++i) {
    LabelSequence s;
    s.n = 256;
    Rng rng(4500 + i);
    for (int j = 0; j < 3 * 256; ++j) s.elems.push_back((int)rng.below(256));
    auto g = CompositeDescriptor::build_linear_length(s, 4, 0.1, InwMode::expander);
    int k = g.frequent_threshold();
    CHECK(k == linear_length_read_bound(256));
    CHECK((int64_t)g.frequent_vars().size() <= (int64_t)s.elems.size() / k);
    auto counts = s.counts();
    for (int v = 0; v < 256; ++v) {
      bool freq = std::find(g.frequent_vars().begin(), g.frequent_vars().end(), v) != g.frequent_vars().end();
      CHECK(freq == (counts[v] > k));
    }
  }
}

TEST_CASE("composite json round trip") {
  auto s = random_read_k_sequence(8, 2, 88);
  auto g = CompositeDescriptor::build_read_k(s, 4, 0.1, InwMode::toy);
  auto back = CompositeDescriptor::from_json(g.to_json());
  CHECK(back.to_json() == g.to_json());
  Rng rng(6);
  Bits seed = Bits::random((size_t)g.seed_length(), rng);
  CHECK(back.expand(seed) == g.expand(seed));

  LabelSequence lin;
  lin.n = 12;
  Rng rng2(9);
  for (int j = 0; j < 30; ++j) lin.elems.push_back((int)rng2.below(12));
  auto gl = CompositeDescriptor::build_linear_length(lin, 4, 0.1, InwMode::toy);
  auto back2 = CompositeDescriptor::from_json(gl.to_json());
  CHECK(back2.to_json() == gl.to_json());
  Bits seed2 = Bits::random((size_t)gl.seed_length(), rng2);
  CHECK(back2.expand(seed2) == gl.expand(seed2));

  auto j = g.to_json();
  j["seed_len"] = g.seed_length() + 1;
  CHECK_THROWS_AS(CompositeDescriptor::from_json(j), Error);
}

TEST_CASE("restriction of a part stays inside the support") {
  // support-subset sequences build and serialize too
  auto s = random_read_k_sequence(10, 2, 123);
  auto r = s.restricted(std::vector<int>{1, 3, 4, 7, 9});
  auto g = CompositeDescriptor::build_read_k(r, 4, 0.2, InwMode::toy);
  CHECK(g.output_length() == 5);
  auto back = CompositeDescriptor::from_json(g.to_json());
  CHECK(back.to_json() == g.to_json());
}
