#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "obp/errors.hpp"

namespace obp {

enum class Direction { increasing, decreasing };
const char* name(Direction d);

// Variable access order with arbitrary multiplicities; ids live in [0, n).
struct LabelSequence {
  int n = 0;
  std::vector<int> elems;

  std::vector<int> counts() const;
  size_t length() const { return elems.size(); }
};

// A sequence over a support set of variables in which every support variable
// occurs exactly k times. Restrictions keep the original variable ids, so the
// support of a restricted sequence is not contiguous in general.
class ReadKSequence {
public:
  // Checks that elems uses ids in [0, n) and every id occurs exactly k times.
  static ReadKSequence validate(std::vector<int> elems, int n, int k);

  int k() const { return k_; }
  const std::vector<int>& elems() const { return elems_; }
  const std::vector<int>& support() const { return support_; }
  int support_size() const { return (int)support_.size(); }
  size_t length() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  // True when the support is exactly {0, ..., n-1}.
  bool dense() const;

  int rank_of(int var) const;  // index of var in the sorted support
  size_t occurrence_position(int var, int read) const;  // read is 1-based
  int read_index_of(size_t pos) const;                  // 1-based occurrence number

  ReadKSequence restricted(std::span<const int> vars) const;
  ReadKSequence pair_view(int read_i, int read_j) const;

  std::string to_string() const;

  // Trusted constructor for internal callers; invariants are asserted.
  static ReadKSequence from_parts(std::vector<int> elems, std::vector<int> support, int k);

private:
  ReadKSequence() = default;
  void index();

  int k_ = 0;
  std::vector<int> elems_;
  std::vector<int> support_;               // sorted, unique
  std::vector<int> rank_;                  // var id -> rank, -1 outside support
  std::vector<std::vector<size_t>> occ_;   // rank -> positions of its k occurrences
  std::vector<int> read_of_;               // position -> occurrence number (1-based)
};

struct OccurrenceView {
  int read_index = 0;
  std::vector<int> order;  // variables by position of their read_index-th occurrence
};
OccurrenceView occurrence_view(const ReadKSequence& s, int read);

struct RelabelResult {
  ReadKSequence sequence;                       // dense, first-occurrence order = identity
  std::vector<std::pair<int, int>> mapping;     // (old id, new id), sorted by old id
};
RelabelResult canonical_relabel(const ReadKSequence& s);

struct MonotoneWitness {
  int read = 0;          // 1-based read whose view breaks monotonicity
  size_t view_index = 0; // index of the later element of the violating pair
  int earlier_var = 0, later_var = 0;
};
struct PerReadMonotoneReport {
  bool ok = false;
  std::vector<Direction> directions;  // valid iff ok
  std::optional<MonotoneWitness> witness;
};
PerReadMonotoneReport is_per_read_monotone(const ReadKSequence& s);

struct InterleavingBlock {
  std::vector<int> vars;  // sorted
  size_t begin = 0, end = 0;
};
struct InterleavingWitness {
  size_t position = 0;            // index of the first occurrence that forced the failing close
  std::vector<int> open_firsts;   // sorted firsts of the block that could not close
  std::vector<int> closed_vars;   // sorted vars whose second occurrence already arrived
};
struct InterleavingReport {
  bool ok = false;
  std::vector<InterleavingBlock> blocks;
  std::optional<InterleavingWitness> witness;
};
// Forced-block greedy scan; block boundaries of a valid decomposition are
// forced, so the greedy decides existence and the decomposition is unique.
InterleavingReport is_2_regularly_interleaving(const ReadKSequence& s);

struct PairInterleaving {
  int read_i = 0, read_j = 0;
  InterleavingReport report;
};
struct KInterleavingReport {
  bool ok = false;
  std::vector<PairInterleaving> pairs;  // stops at the first failing pair
};
KInterleavingReport is_k_regularly_interleaving(const ReadKSequence& s);

struct MonotoneSegment {
  size_t begin = 0, end = 0;
  Direction dir = Direction::increasing;
  int first_read = 0;  // 1-based index of the first read assigned to this segment
};
struct MonotoneDecompositionResult {
  std::vector<MonotoneSegment> segments;
};
// Splits a per-read-monotone sequence into maximal same-direction runs of
// reads and checks each run occupies a contiguous chunk. Throws
// not_per_read_monotone / segment_assignment on failure.
MonotoneDecompositionResult monotone_decomposition(const ReadKSequence& s);

struct HeadWalkProfile {
  std::vector<int> tape_order;
  std::vector<int64_t> stops;   // reads landing on each tape cell; sums to the sequence length
  std::vector<int64_t> visits;  // stops plus strict pass-throughs
  int64_t max_visits = 0;
};
HeadWalkProfile head_visit_profile(const ReadKSequence& s, std::span<const int> tape_order);
// Identity tape order: support sorted ascending.
HeadWalkProfile head_visit_profile(const ReadKSequence& s);

// Sequence files: line 1 "n k", line 2 onward the k*n whitespace-separated
// 1-based variable ids; '#' starts a comment line. k = 0 marks a general
// sequence whose length is given in place of k.
ReadKSequence read_sequence_file(const std::filesystem::path& path);
void write_sequence_file(const std::filesystem::path& path, const ReadKSequence& s);
LabelSequence read_label_sequence_file(const std::filesystem::path& path);
void write_label_sequence_file(const std::filesystem::path& path, const LabelSequence& s);

}  // namespace obp
