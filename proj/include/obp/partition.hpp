#pragma once

#include <span>
#include <vector>

#include "obp/sequence.hpp"

namespace obp {

// Indices of a longest strictly monotone subsequence of distinct values,
// O(m log m) patience piles. Among equal-length answers the lexicographically
// smallest index set is returned.
std::vector<size_t> longest_monotone_subsequence(std::span<const int> values, Direction dir);

// A subset Y of the support such that the restriction to Y is
// per-read-monotone, built by keeping a longest monotone subsequence (the
// better direction, ties to increasing) under each read's order in turn.
// When the first read is already monotone on the support, |Y| is at least
// ceil(m^(1/2^(k-1))) with m the support size; otherwise the first read
// costs one more halving of the exponent.
std::vector<int> extract_monotone_subset(const ReadKSequence& s);

// True when the sequence is k consecutive full passes over its support.
bool is_k_pass(const ReadKSequence& s);

struct PartitionPart {
  std::vector<int> vars;  // sorted
  std::vector<Direction> directions;
  KInterleavingReport interleaving;
};
struct VariablePartition {
  std::vector<PartitionPart> parts;
  bool k_pass_path = false;
  size_t t() const { return parts.size(); }
};

// Disjoint cover of the support; every part's restriction is
// per-read-monotone and k-regularly-interleaving. Pass-structured inputs use
// repeated extraction alone; otherwise extracted sets are split further at
// forced-block failures until the interleaving checker accepts (singletons
// always do). Certificates are recomputed and verified before returning.
VariablePartition partition_variables(const ReadKSequence& s);

// Re-derives every certificate from scratch; throws certificate_violation.
void verify_partition(const ReadKSequence& s, const VariablePartition& p);

}  // namespace obp
