#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "json.hpp"
#include "obp/bits.hpp"
#include "obp/dyadic.hpp"
#include "obp/sequence.hpp"

namespace obp {

struct Layer {
  int var = 0;                  // variable read on this layer
  std::vector<int> next0, next1;  // transition maps [w] -> [w]
};

// Layered oblivious branching program of uniform width. States are dense
// 0-based integers per level; acceptance is a state set at the final level.
class ObliviousProgram {
public:
  ObliviousProgram(int n, int w, std::vector<Layer> layers, int start, const std::vector<int>& accepting);

  int n() const { return n_; }
  int width() const { return w_; }
  size_t length() const { return layers_.size(); }
  const std::vector<Layer>& layers() const { return layers_; }
  int start() const { return start_; }
  const std::vector<uint8_t>& accepting_mask() const { return accepting_; }
  std::vector<int> accepting_states() const;

  bool evaluate(const Bits& x) const;
  bool evaluate_u64(uint64_t x) const;  // n <= 64

private:
  int n_ = 0, w_ = 0, start_ = 0;
  std::vector<Layer> layers_;
  std::vector<uint8_t> accepting_;
};

struct ReadProfile {
  LabelSequence labels;
  std::vector<int> counts;
  int k_max = 0;
  bool exact_k = false;  // every variable read exactly k_max times
};
ReadProfile read_profile(const ObliviousProgram& b);
std::optional<ReadKSequence> read_sequence_if_exact(const ObliviousProgram& b);

struct Restriction {
  std::vector<int> vars;  // sorted subset of [0, n)
  Bits values;            // one bit per fixed variable
};

// Fixed layers are composed through; kept variables are relabeled densely in
// ascending order. evaluate(restricted, y) == evaluate(b, merge(y)) for all y.
ObliviousProgram restrict_program(const ObliviousProgram& b, const Restriction& r);
Bits merge_assignment(int n, const Restriction& r, const Bits& free_values);

// Appends identity layers so every variable is read exactly max-count times.
ObliviousProgram pad_to_exact_k(const ObliviousProgram& b);

enum class CountMethod { exhaustive, read_once_dp };
struct AcceptanceResult {
  u128 accepting = 0;
  int log2_total = 0;
  Dyadic probability;
  CountMethod method = CountMethod::exhaustive;
};

// Exact acceptance under uniform inputs. Repeated reads are correlated, so
// the layer DP is only valid for read-once programs; everything else is
// counted by full input enumeration (n <= input_cap).
AcceptanceResult acceptance_probability_uniform(const ObliviousProgram& b, int input_cap = 24);
AcceptanceResult exhaustive_acceptance(const ObliviousProgram& b, int threads = 1);
AcceptanceResult read_once_acceptance(const ObliviousProgram& b);

// y_z selector on n_addr y-bits and log2(n_addr) z-bits, read order y, z, y.
ObliviousProgram build_address_function(int n_addr);
// Accepts iff the sum of read bits (per occurrence) is target mod modulus.
ObliviousProgram build_mod_counter(const LabelSequence& order, int modulus, int target);
ObliviousProgram random_obp(const LabelSequence& order, int w, uint64_t seed);

nlohmann::json program_to_json(const ObliviousProgram& b);
ObliviousProgram program_from_json(const nlohmann::json& j);
ObliviousProgram read_program_file(const std::filesystem::path& path);
void write_program_file(const std::filesystem::path& path, const ObliviousProgram& b);

}  // namespace obp
