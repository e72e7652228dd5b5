#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "obp/dyadic.hpp"
#include "obp/sequence.hpp"

namespace obp {

// Negative controls: deliberately broken checkers that the cross-validating
// suite must catch.
enum class SuiteMutation { none, interleaving_accept_all, visit_bound_halved };

struct PropertyResult {
  std::string name;
  bool pass = true;
  uint64_t instances = 0;
  std::string counterexample;  // empty when passing
};

struct SuiteResult {
  std::string name;
  std::vector<PropertyResult> properties;
  bool all_pass() const;
  nlohmann::json to_json() const;
};

// Exhaustive structural battery over every read-k sequence with support
// sizes 1..n_max: enumeration self-check, greedy interleaving vs exhaustive
// block search, the adjacent-step property of monotone interleaving
// sequences, and the 2k visit bound.
SuiteResult structural_suite(int n_max, int k, SuiteMutation mutation = SuiteMutation::none);

void for_each_read_k(int n, int k, const std::function<void(const ReadKSequence&)>& fn);
std::vector<ReadKSequence> enumerate_read_k(int n, int k);
u128 read_k_sequence_count(int n, int k);  // (kn)! / (k!)^n

ReadKSequence random_read_k_sequence(int n, int k, uint64_t seed);
// Identity first pass, then the given permutation of [0, n).
ReadKSequence two_pass_sequence(int n, std::span<const int> second_pass);
ReadKSequence k_pass_sequence(int n, int k, uint64_t seed);  // random passes, identity first
// Random per-read-monotone, k-regularly-interleaving instances built from
// concatenated blocks of pass- and run-structured pieces.
ReadKSequence random_structured_sequence(int n, int k, uint64_t seed);

// Oracle: search over all consecutive complete-block decompositions.
InterleavingReport exhaustive_interleaving(const ReadKSequence& s);

// Shrinks a failing sequence by deleting variables while the predicate keeps
// failing; predicate(s) == true means "still fails".
ReadKSequence shrink_counterexample(const ReadKSequence& s, const std::function<bool(const ReadKSequence&)>& fails);

}  // namespace obp
