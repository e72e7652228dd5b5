#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "obp/expander.hpp"
#include "obp/fooling.hpp"
#include "obp/inw.hpp"
#include "obp/program.hpp"
#include "obp/suites.hpp"

using namespace obp;

TEST_CASE("seed layout arithmetic") {
  auto single = InwDescriptor::build(1, 2, 4, 0.5, InwMode::toy);
  CHECK(single.seed_length() == 1);
  CHECK(single.expand(Bits::parse("1")) == Bits::parse("1"));
  CHECK(single.expand(Bits::parse("0")) == Bits::parse("0"));

  // three levels of 4 auxiliary bits on top of a 1-bit leaf
  auto toy8 = InwDescriptor::build(8, 2, 4, 0.5, InwMode::toy);
  CHECK(toy8.seed_length() == 13);

  auto uni = InwDescriptor::build(8, 2, 4, 0.5, InwMode::uniform);
  CHECK(uni.seed_length() == 8);
  Rng rng(1);
  Bits s = Bits::random(8, rng);
  CHECK(uni.expand(s) == s);

  CHECK_THROWS_AS(InwDescriptor::build(0, 2, 4, 0.5, InwMode::toy), Error);
  CHECK_THROWS_AS(InwDescriptor::build(8, 0, 4, 0.5, InwMode::toy), Error);
  CHECK_THROWS_AS(InwDescriptor::build(8, 2, 1, 0.5, InwMode::toy), Error);
  CHECK_THROWS_AS(InwDescriptor::build(8, 2, 4, 1.5, InwMode::toy), Error);
  CHECK_THROWS_AS(toy8.expand(Bits(12)), Error);
}

TEST_CASE("stored seed length always equals the layout sum") {
  for (int64_t n : {1, 2, 3, 5, 8, 11, 16, 33}) {
    for (InwMode mode : {InwMode::toy, InwMode::hash, InwMode::expander}) {
      auto g = InwDescriptor::build(n, 4, 4, 0.1, mode);
      // recompute from the level table: width(n) = 1 + sum of aux along the left spine
      int64_t acc = 1;
      int64_t len = n;
      while (len > 1) {
        acc += g.aux_width(len);
        len = (len + 1) / 2;
      }
      CHECK(acc == g.seed_length());
      CHECK(g.sub_seed_width(n) == g.seed_length());
    }
  }
}

TEST_CASE("expander mode seed length grows like log n times the budget") {
  std::vector<int64_t> s;
  for (int e = 3; e <= 10; ++e) s.push_back(InwDescriptor::build(int64_t{1} << e, 4, 4, 0.1, InwMode::expander).seed_length());
  for (size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
  // between linear and quadratic in the level count
  double ratio = (double)s.back() / (double)s.front();
  CHECK(ratio >= 10.0 / 3.0 * 0.9);
  CHECK(ratio <= (10.0 / 3.0) * (10.0 / 3.0));
}

TEST_CASE("expansion is deterministic and total") {
  for (InwMode mode : {InwMode::toy, InwMode::hash, InwMode::expander}) {
    auto g = InwDescriptor::build(11, 4, 4, 0.25, mode);
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
      Bits seed = Bits::random((size_t)g.seed_length(), rng);
      Bits a = g.expand(seed);
      Bits b = g.expand(seed);
      CHECK(a == b);
      CHECK(a.size() == 11);
    }
  }
}

TEST_CASE("toy truth table is stable and every seed bit matters") {
  auto g = InwDescriptor::build(8, 2, 4, 0.5, InwMode::toy);
  REQUIRE(g.seed_length() == 13);
  std::vector<uint64_t> table(1 << 13);
  for (uint64_t s = 0; s < table.size(); ++s) table[s] = g.expand(Bits::from_u64(s, 13)).to_u64();
  for (uint64_t s = 0; s < table.size(); ++s)
    CHECK(table[s] == g.expand(Bits::from_u64(s, 13)).to_u64());

  // non-degeneracy: for every seed bit there is a seed where flipping it changes the output
  for (int bit = 0; bit < 13; ++bit) {
    bool matters = false;
    for (uint64_t s = 0; s < table.size() && !matters; ++s)
      matters = table[s] != table[s ^ (uint64_t{1} << bit)];
    CHECK(matters);
  }

  // min-entropy of the output cannot exceed the seed length
  std::map<uint64_t, uint64_t> hist;
  for (uint64_t v : table) ++hist[v];
  uint64_t max_count = 0;
  for (auto& [v, c] : hist) max_count = std::max(max_count, c);
  CHECK(max_count >= table.size() >> 8);  // 8 output bits
}

TEST_CASE("expander steps") {
  Bits v = Bits::parse("1010");  // (x, y) = (1, 1) on the 4x4 grid
  CHECK(expander_walk(v, Bits(0), 2) == v);  // zero steps

  // labels pair into inverses: 0<->2, 1<->3, 4<->6, 5<->7
  for (int cb : {1, 2, 3}) {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
      Bits u = Bits::random(2 * (size_t)cb, rng);
      for (int l = 0; l < 8; ++l) {
        int inv = l ^ 2;
        CHECK(expander_neighbor(expander_neighbor(u, l, cb), inv, cb) == u);
      }
    }
  }

  // out-degree regularity on the 4x4 grid: 8 labeled neighbors per vertex
  int cb = 2;
  for (uint64_t packed = 0; packed < 16; ++packed) {
    Bits u = Bits::from_u64(packed, 4);
    int count = 0;
    for (int l = 0; l < 8; ++l) {
      expander_neighbor(u, l, cb);
      ++count;
    }
    CHECK(count == 8);
  }
}

TEST_CASE("grid expander mixes: second eigenvalue of the 8x8 grid") {
  double lambda = measured_second_eigenvalue(3);
  CHECK(lambda > 0.0);
  CHECK(lambda <= ExpanderSpec::base_lambda_bound);
}

TEST_CASE("hash mode fools random read-once programs at n = 8") {
  // identity reading order, so one visit per cell
  LabelSequence order;
  order.n = 8;
  for (int v = 0; v < 8; ++v) order.elems.push_back(v);
  auto g = InwDescriptor::build(8, 2, 4, 0.1, InwMode::hash);
  for (uint64_t i = 0; i < 5; ++i) {
    auto b = random_obp(order, 4, 4000 + i);
    auto rep = sampled_fooling_error(b, g, 100'000, 13 + i, Caps{}, 2, 0.1);
    CHECK(rep.error_estimate <= 0.1 + rep.ci_half_width);
  }
}

TEST_CASE("descriptor json round trip") {
  for (InwMode mode : {InwMode::toy, InwMode::hash, InwMode::expander, InwMode::uniform}) {
    auto g = InwDescriptor::build(11, 4, 4, 0.125, mode);
    auto back = InwDescriptor::from_json(g.to_json());
    CHECK(back.seed_length() == g.seed_length());
    CHECK(back.to_json() == g.to_json());
    Rng rng(3);
    Bits seed = Bits::random((size_t)g.seed_length(), rng);
    CHECK(back.expand(seed) == g.expand(seed));
  }
  auto j = InwDescriptor::build(8, 2, 4, 0.5, InwMode::toy).to_json();
  j["seed_len"] = 12;  // tampered
  CHECK_THROWS_AS(InwDescriptor::from_json(j), Error);
}
