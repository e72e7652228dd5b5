#pragma once

#include "obp/bits.hpp"

namespace obp {

// Degree-8 affine expander on the grid Z_m x Z_m with m = 2^coord_bits.
// Labels 0..7 pick one of x += 2y, x += 2y+1, x -= 2y, x -= 2y+1 and the four
// symmetric maps on y. The label set is closed under inverses, so the
// multigraph is undirected and its walk matrix is symmetric. Powers of two
// keep the modular arithmetic to shifts and masked adds, so coordinates of
// thousands of bits stay cheap.
struct ExpanderSpec {
  int coord_bits = 1;
  int walk_steps = 0;
  static constexpr int degree = 8;
  static constexpr int label_bits = 3;             // ceil(log2 degree)
  static constexpr double base_lambda_bound = 0.94;  // empirical bound used for sizing
};

// One labeled step; vertex is 2*coord_bits wide, x low, y high.
Bits expander_neighbor(const Bits& vertex, int label, int coord_bits);

// Walk of labels.size()/3 steps, 3 label bits per step.
Bits expander_walk(const Bits& vertex, const Bits& labels, int coord_bits);

// Second-largest |eigenvalue| of the normalized walk matrix, by power
// iteration with the uniform vector projected out. Small m only.
double measured_second_eigenvalue(int coord_bits, int iterations = 3000);

}  // namespace obp
