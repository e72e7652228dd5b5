#pragma once

#include <map>
#include <vector>

#include "json.hpp"
#include "obp/generator.hpp"

namespace obp {

// Instantiations of the recursive mixing generator. The right child's
// sub-seed is derived from the left child's sub-seed and a per-level
// auxiliary word:
//   expander - powered walk on the affine grid expander, 3 bits per step;
//   hash     - Toeplitz affine two-independent hash keyed by the word;
//   toy      - XOR fold of a 4-bit word, small enough to enumerate seeds;
//   uniform  - no derivation at all, seed length equals output length.
enum class InwMode { expander, hash, toy, uniform };
const char* name(InwMode m);
InwMode inw_mode_from(const std::string& s);

// Balanced binary recursion over output positions: a node over len bits
// splits ceil/floor; its sub-seed is (left child's sub-seed, auxiliary word).
// Leaves are single output bits, so the seed length is 1 plus the sum of the
// auxiliary widths along the left spine.
class InwDescriptor final : public BitGenerator {
public:
  static InwDescriptor build(int64_t n_out, int d, int w, double eps, InwMode mode);

  int64_t seed_length() const override { return seed_len_; }
  int64_t output_length() const override { return n_out_; }
  Bits expand(const Bits& seed) const override;
  std::string id() const override;

  InwMode mode() const { return mode_; }
  int d() const { return d_; }
  int w() const { return w_; }
  double eps() const { return eps_; }
  // communication budget that sizes the mixing: d*ceil(log2 w) + ceil(log2(2 n_out / eps))
  int budget_bits() const { return budget_bits_; }
  int walk_steps() const { return walk_steps_; }

  int64_t sub_seed_width(int64_t len) const;
  int64_t aux_width(int64_t len) const;
  // (length, sub-seed width, aux width) for every interval length that occurs
  std::vector<std::array<int64_t, 3>> level_widths() const;

  nlohmann::json to_json() const;
  static InwDescriptor from_json(const nlohmann::json& j);

private:
  InwDescriptor() = default;
  void expand_node(int64_t out_off, int64_t len, const Bits& sub, Bits& out) const;
  Bits derive(const Bits& core, const Bits& aux, int64_t out_width) const;

  int64_t n_out_ = 0;
  int d_ = 0, w_ = 0;
  double eps_ = 0;
  InwMode mode_ = InwMode::uniform;
  int budget_bits_ = 0;
  int walk_steps_ = 0;
  int64_t seed_len_ = 0;
  std::map<int64_t, int64_t> width_;  // interval length -> sub-seed width
};

// Smallest t with 2^t >= num / den (num, den > 0).
int ceil_log2_ratio(double num, double den);
int ceil_log2(int64_t v);

}  // namespace obp
