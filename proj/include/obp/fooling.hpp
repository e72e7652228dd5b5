#pragma once

#include <vector>

#include "json.hpp"
#include "obp/dyadic.hpp"
#include "obp/generator.hpp"
#include "obp/program.hpp"

namespace obp {

struct Caps {
  int input_cap = 24;  // exhaustive input enumeration up to 2^input_cap
  int seed_cap = 26;   // exhaustive seed enumeration up to 2^seed_cap
};

enum class FoolingMethod { exhaustive, sampled };
const char* name(FoolingMethod m);

struct FoolingReport {
  std::string program_id, generator_id;
  FoolingMethod method = FoolingMethod::exhaustive;
  int n = 0;
  int64_t seed_len = 0;

  bool uniform_exact = true;
  Dyadic uniform_acceptance;       // exact when uniform_exact
  double uniform_estimate = 0;     // always set (exact value converted when exact)

  bool generator_exact = true;
  Dyadic generator_acceptance;     // exact when generator_exact
  double generator_estimate = 0;

  Dyadic error;                    // exact when both sides exact
  double error_estimate = 0;
  double ci_half_width = 0;        // two-sided 99% normal CI on the sampled side
  uint64_t samples = 0;
  uint64_t rng_seed = 0;

  double eps_bound = 0;            // 0 when no bound was declared
  bool bound_inside_ci = false;    // eps_bound lies inside [err-ci, err+ci]

  double runtime_seconds = 0;      // informational; never serialized
};

nlohmann::json fooling_report_to_json(const FoolingReport& r);
std::string fooling_report_csv_header();
std::string fooling_report_csv_row(const std::string& id, const FoolingReport& r);

// |Pr[B(G(seed)) = 1] - Pr[B(x) = 1]| with both sides counted exactly.
FoolingReport exact_fooling_error(const ObliviousProgram& b, const BitGenerator& g, const Caps& caps = {},
                                  int threads = 1, double eps_bound = 0);

// Generator side Monte Carlo (chunked, thread-count independent); uniform
// side exact when it fits under the cap, otherwise sampled as well.
FoolingReport sampled_fooling_error(const ObliviousProgram& b, const BitGenerator& g, uint64_t samples,
                                    uint64_t rng_seed, const Caps& caps = {}, int threads = 1,
                                    double eps_bound = 0);

// A distribution on {0,1}^bits with dyadic point masses weight[i] / 2^log2_den.
struct EnumDistribution {
  int bits = 0;
  int log2_den = 0;
  std::vector<uint64_t> weights;

  static EnumDistribution uniform(int bits);
  static EnumDistribution from_generator(const BitGenerator& g, const Caps& caps = {});
  // independent bits, each 1 with probability num_one / 2^log2_den_bit
  static EnumDistribution biased_product(int bits, int num_one, int log2_den_bit);
};

struct HybridReport {
  Dyadic product_gap;         // |Pr_{mu1}[B=1] - Pr_{mu2}[B=1]|
  Dyadic max_restricted_gap;  // max_b |Pr_U[B|_{Z=b}=1] - Pr_D[B|_{Z=b}=1]|
  bool holds = false;         // product_gap <= max_restricted_gap
};

// Exact check that swapping uniform bits for D on the coordinates Y moves the
// acceptance probability by at most the worst restricted gap, for any D' on
// the remaining coordinates.
HybridReport hybrid_check(const ObliviousProgram& b, const std::vector<int>& y_vars, const EnumDistribution& d,
                          const EnumDistribution& d_prime);

}  // namespace obp
