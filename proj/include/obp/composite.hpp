#pragma once

#include <vector>

#include "obp/inw.hpp"
#include "obp/partition.hpp"

namespace obp {

enum class CompositeKind { read_k, linear_length };
const char* name(CompositeKind k);

struct SeedLengthReport {
  int n = 0, k = 0, w = 0, t = 0;
  double eps = 0;
  std::vector<int64_t> part_seed_lengths;
  int64_t frequent_bits = 0;
  int64_t total = 0;
  double envelope = 0;  // t * log2(n) * (log2(n/eps) + k log2(w)), for comparison only
};

// Product of independent per-part generators over a variable partition.
//   read_k        - one mixing generator per partition part, visit bound 2k,
//                   per-part error eps/n;
//   linear_length - variables read more than k(n) times get one raw seed bit
//                   each, the rest go through the read_k construction.
class CompositeDescriptor final : public BitGenerator {
public:
  struct Part {
    std::vector<int> vars;  // sorted
    InwDescriptor inw;
    int64_t seed_offset = 0;
  };

  static CompositeDescriptor build_read_k(const ReadKSequence& s, int w, double eps, InwMode mode);
  static CompositeDescriptor build_linear_length(const LabelSequence& s, int w, double eps, InwMode mode);

  int64_t seed_length() const override { return seed_len_; }
  int64_t output_length() const override { return (int64_t)output_vars_.size(); }
  Bits expand(const Bits& seed) const override;
  std::string id() const override;

  CompositeKind kind() const { return kind_; }
  int k() const { return k_; }
  int w() const { return w_; }
  double eps() const { return eps_; }
  InwMode mode() const { return mode_; }
  const std::vector<Part>& parts() const { return parts_; }
  const std::vector<int>& frequent_vars() const { return frequent_; }
  int frequent_threshold() const { return freq_threshold_; }
  const std::vector<int>& output_vars() const { return output_vars_; }
  const LabelSequence& source() const { return source_; }
  int64_t frequent_offset() const { return frequent_offset_; }

  SeedLengthReport seed_report() const;

  nlohmann::json to_json() const;
  static CompositeDescriptor from_json(const nlohmann::json& j);

private:
  CompositeDescriptor() = default;
  int coordinate(int var) const;

  CompositeKind kind_ = CompositeKind::read_k;
  int k_ = 0, w_ = 0;
  double eps_ = 0;
  InwMode mode_ = InwMode::uniform;
  LabelSequence source_;
  std::vector<Part> parts_;
  std::vector<int> frequent_;  // sorted
  int freq_threshold_ = 0;
  int64_t frequent_offset_ = 0;
  int64_t seed_len_ = 0;
  std::vector<int> output_vars_;  // sorted; coordinate i belongs to output_vars_[i]
};

// The read bound k(n) = max(1, floor(log2(log2 n) / 2)) for linear-length inputs.
int linear_length_read_bound(int n);

}  // namespace obp
