#include "obp/fooling.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

namespace obp {

namespace {

constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile
constexpr uint64_t kSampleChunk = 4096;       // rng stream granularity; fixed so thread count never matters

double fmt_double(double v) { return v; }

std::string dtos(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

uint64_t count_accepting_inputs(const ObliviousProgram& b, int threads) {
  uint64_t total = uint64_t{1} << b.n();
  threads = std::max(1, threads);
  if (threads == 1 || total < 1 << 16) return (uint64_t)exhaustive_acceptance(b, 1).accepting;
  return (uint64_t)exhaustive_acceptance(b, threads).accepting;
}

uint64_t count_accepting_seeds(const ObliviousProgram& b, const BitGenerator& g, int threads) {
  int64_t s = g.seed_length();
  uint64_t total = uint64_t{1} << s;
  threads = std::max(1, std::min(threads, 64));
  if (total < (uint64_t)1 << 14) threads = 1;
  std::vector<uint64_t> counts(threads, 0);
  bool small_n = b.n() <= 64;
  auto work = [&](int t) {
    uint64_t lo = total / threads * t + std::min<uint64_t>(t, total % threads);
    uint64_t hi = lo + total / threads + ((uint64_t)t < total % threads ? 1 : 0);
    uint64_t c = 0;
    for (uint64_t x = lo; x < hi; ++x) {
      Bits out = g.expand(Bits::from_u64(x, (size_t)s));
      c += small_n ? b.evaluate_u64(out.to_u64()) : b.evaluate(out);
    }
    counts[t] = c;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  uint64_t acc = 0;
  for (uint64_t c : counts) acc += c;
  return acc;
}

}  // namespace

const char* name(FoolingMethod m) { return m == FoolingMethod::exhaustive ? "exhaustive" : "sampled"; }

FoolingReport exact_fooling_error(const ObliviousProgram& b, const BitGenerator& g, const Caps& caps, int threads,
                                  double eps_bound) {
  if (g.output_length() != b.n())
    fail(Error::Code::incompatible_dimensions, "generator emits " + std::to_string(g.output_length()) +
                                                   " bits, program reads " + std::to_string(b.n()));
  if (b.n() > caps.input_cap)
    fail(Error::Code::too_large_for_exhaustive,
         "n = " + std::to_string(b.n()) + " exceeds the input cap; use sampled_fooling_error");
  if (g.seed_length() > caps.seed_cap)
    fail(Error::Code::too_large_for_exhaustive,
         "seed length " + std::to_string(g.seed_length()) + " exceeds the seed cap; use sampled_fooling_error");

  auto t0 = std::chrono::steady_clock::now();
  FoolingReport r;
  r.program_id = "obp[n=" + std::to_string(b.n()) + ",w=" + std::to_string(b.width()) + "]";
  r.generator_id = g.id();
  r.method = FoolingMethod::exhaustive;
  r.n = b.n();
  r.seed_len = g.seed_length();
  r.eps_bound = eps_bound;

  uint64_t cu = count_accepting_inputs(b, threads);
  r.uniform_acceptance = Dyadic::ratio(cu, b.n());
  r.uniform_estimate = r.uniform_acceptance.to_double();

  uint64_t cg = count_accepting_seeds(b, g, threads);
  r.generator_acceptance = Dyadic::ratio(cg, (int)g.seed_length());
  r.generator_estimate = r.generator_acceptance.to_double();

  r.error = abs_diff(r.uniform_acceptance, r.generator_acceptance);
  r.error_estimate = r.error.to_double();
  r.samples = uint64_t{1} << g.seed_length();
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

FoolingReport sampled_fooling_error(const ObliviousProgram& b, const BitGenerator& g, uint64_t samples,
                                    uint64_t rng_seed, const Caps& caps, int threads, double eps_bound) {
  if (g.output_length() != b.n())
    fail(Error::Code::incompatible_dimensions, "generator emits " + std::to_string(g.output_length()) +
                                                   " bits, program reads " + std::to_string(b.n()));
  if (samples < 10'000) fail(Error::Code::invalid_params, "need at least 10^4 samples");

  auto t0 = std::chrono::steady_clock::now();
  FoolingReport r;
  r.program_id = "obp[n=" + std::to_string(b.n()) + ",w=" + std::to_string(b.width()) + "]";
  r.generator_id = g.id();
  r.method = FoolingMethod::sampled;
  r.n = b.n();
  r.seed_len = g.seed_length();
  r.eps_bound = eps_bound;
  r.samples = samples;
  r.rng_seed = rng_seed;

  int64_t s = g.seed_length();
  uint64_t chunks = (samples + kSampleChunk - 1) / kSampleChunk;
  threads = std::max(1, std::min<int>(threads, 64));
  std::vector<uint64_t> gen_counts(threads, 0), uni_counts(threads, 0);
  bool uniform_sampled = b.n() > caps.input_cap;
  bool small_n = b.n() <= 64;

  auto work = [&](int t) {
    uint64_t cg = 0, cu = 0;
    for (uint64_t c = t; c < chunks; c += threads) {
      uint64_t lo = c * kSampleChunk, hi = std::min(samples, lo + kSampleChunk);
      Rng rng(derive_seed(rng_seed, c));
      for (uint64_t i = lo; i < hi; ++i) {
        Bits seed = Bits::random((size_t)s, rng);
        Bits out = g.expand(seed);
        cg += small_n ? b.evaluate_u64(out.to_u64()) : b.evaluate(out);
        if (uniform_sampled) {
          Bits x = Bits::random((size_t)b.n(), rng);
          cu += small_n ? b.evaluate_u64(x.to_u64()) : b.evaluate(x);
        }
      }
    }
    gen_counts[t] = cg;
    uni_counts[t] = cu;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  uint64_t cg = 0, cu = 0;
  for (int t = 0; t < threads; ++t) {
    cg += gen_counts[t];
    cu += uni_counts[t];
  }

  r.generator_exact = false;
  r.generator_estimate = (double)cg / (double)samples;
  if (uniform_sampled) {
    r.uniform_exact = false;
    r.uniform_estimate = (double)cu / (double)samples;
  } else {
    r.uniform_acceptance = exhaustive_acceptance(b, threads).probability;
    r.uniform_estimate = r.uniform_acceptance.to_double();
  }
  double p = r.generator_estimate;
  r.ci_half_width = kZ99 * std::sqrt(std::max(p * (1 - p), 1e-12) / (double)samples);
  if (uniform_sampled) {
    double q = r.uniform_estimate;
    r.ci_half_width += kZ99 * std::sqrt(std::max(q * (1 - q), 1e-12) / (double)samples);
  }
  r.error_estimate = std::abs(r.generator_estimate - r.uniform_estimate);
  if (eps_bound > 0)
    r.bound_inside_ci = eps_bound >= r.error_estimate - r.ci_half_width && eps_bound <= r.error_estimate + r.ci_half_width;
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

nlohmann::json fooling_report_to_json(const FoolingReport& r) {
  nlohmann::json j;
  j["program"] = r.program_id;
  j["generator"] = r.generator_id;
  j["method"] = name(r.method);
  j["n"] = r.n;
  j["seed_len"] = r.seed_len;
  j["uniform_exact"] = r.uniform_exact;
  if (r.uniform_exact) j["uniform_acceptance"] = r.uniform_acceptance.to_string();
  j["uniform_estimate"] = r.uniform_estimate;
  j["generator_exact"] = r.generator_exact;
  if (r.generator_exact) j["generator_acceptance"] = r.generator_acceptance.to_string();
  j["generator_estimate"] = r.generator_estimate;
  if (r.uniform_exact && r.generator_exact) j["error"] = r.error.to_string();
  j["error_estimate"] = r.error_estimate;
  j["ci_half_width"] = r.ci_half_width;
  j["samples"] = r.samples;
  j["rng_seed"] = r.rng_seed;
  j["eps_bound"] = r.eps_bound;
  j["bound_inside_ci"] = r.bound_inside_ci;
  return j;
}

std::string fooling_report_csv_header() {
  return "id,program,generator,method,n,seed_len,uniform_acceptance,generator_acceptance,error,error_estimate,"
         "ci_half_width,samples,rng_seed,eps_bound,flag";
}

std::string fooling_report_csv_row(const std::string& id, const FoolingReport& r) {
  std::string row = id + "," + r.program_id + "," + r.generator_id + "," + name(r.method) + "," +
                    std::to_string(r.n) + "," + std::to_string(r.seed_len) + ",";
  row += (r.uniform_exact ? r.uniform_acceptance.to_string() : dtos(r.uniform_estimate)) + ",";
  row += (r.generator_exact ? r.generator_acceptance.to_string() : dtos(r.generator_estimate)) + ",";
  row += (r.uniform_exact && r.generator_exact ? r.error.to_string() : std::string("-")) + ",";
  row += dtos(fmt_double(r.error_estimate)) + "," + dtos(r.ci_half_width) + "," + std::to_string(r.samples) + "," +
         std::to_string(r.rng_seed) + "," + dtos(r.eps_bound) + ",";
  row += r.bound_inside_ci ? "bound_inside_ci" : "ok";
  return row;
}

EnumDistribution EnumDistribution::uniform(int bits) {
  if (bits < 0 || bits > 24) fail(Error::Code::too_large_for_exhaustive, "distribution table too large");
  EnumDistribution d;
  d.bits = bits;
  d.log2_den = bits;
  d.weights.assign(size_t{1} << bits, 1);
  return d;
}

EnumDistribution EnumDistribution::from_generator(const BitGenerator& g, const Caps& caps) {
  if (g.output_length() > 24) fail(Error::Code::too_large_for_exhaustive, "distribution table too large");
  if (g.seed_length() > caps.seed_cap)
    fail(Error::Code::too_large_for_exhaustive, "seed space too large to enumerate");
  EnumDistribution d;
  d.bits = (int)g.output_length();
  d.log2_den = (int)g.seed_length();
  d.weights.assign(size_t{1} << d.bits, 0);
  for (uint64_t x = 0; x < (uint64_t{1} << g.seed_length()); ++x)
    ++d.weights[g.expand(Bits::from_u64(x, (size_t)g.seed_length())).to_u64()];
  return d;
}

EnumDistribution EnumDistribution::biased_product(int bits, int num_one, int log2_den_bit) {
  if (bits < 0 || bits > 16 || log2_den_bit < 1 || log2_den_bit > 4 || num_one < 0 ||
      num_one > (1 << log2_den_bit))
    fail(Error::Code::invalid_params, "biased product parameters");
  EnumDistribution d;
  d.bits = bits;
  d.log2_den = bits * log2_den_bit;
  d.weights.assign(size_t{1} << bits, 0);
  uint64_t w0 = (uint64_t)((1 << log2_den_bit) - num_one), w1 = (uint64_t)num_one;
  for (uint64_t x = 0; x < d.weights.size(); ++x) {
    uint64_t w = 1;
    for (int i = 0; i < bits; ++i) w *= ((x >> i) & 1) ? w1 : w0;
    d.weights[x] = w;
  }
  return d;
}

HybridReport hybrid_check(const ObliviousProgram& b, const std::vector<int>& y_vars, const EnumDistribution& d,
                          const EnumDistribution& d_prime) {
  int n = b.n();
  std::vector<uint8_t> in_y(n, 0);
  for (int v : y_vars) {
    if (v < 0 || v >= n) fail(Error::Code::invalid_params, "Y variable out of range");
    in_y[v] = 1;
  }
  std::vector<int> z_vars;
  for (int v = 0; v < n; ++v)
    if (!in_y[v]) z_vars.push_back(v);
  int m = (int)y_vars.size(), zn = (int)z_vars.size();
  if (d.bits != m || d_prime.bits != zn) fail(Error::Code::incompatible_dimensions, "distribution widths");
  if (n > 24) fail(Error::Code::too_large_for_exhaustive, "hybrid check is exhaustive; n too large");

  std::vector<int> y_sorted(y_vars);
  std::sort(y_sorted.begin(), y_sorted.end());

  // exact per-restriction acceptance counts
  u128 lhs_num_pos = 0;  // sum over b of w'(b) * (cntU(b) * 2^{lgD} - wD(b) * 2^m), split by sign
  u128 lhs_num_neg = 0;
  Dyadic rhs = Dyadic::zero();
  for (uint64_t zv = 0; zv < (uint64_t{1} << zn); ++zv) {
    uint64_t cnt_u = 0;
    u128 w_d = 0;
    for (uint64_t yv = 0; yv < (uint64_t{1} << m); ++yv) {
      uint64_t x = 0;
      for (int i = 0; i < zn; ++i)
        if ((zv >> i) & 1) x |= uint64_t{1} << z_vars[i];
      for (int i = 0; i < m; ++i)
        if ((yv >> i) & 1) x |= uint64_t{1} << y_sorted[i];
      if (b.evaluate_u64(x)) {
        ++cnt_u;
        w_d += d.weights[yv];
      }
    }
    Dyadic pu = Dyadic::ratio(cnt_u, m);
    Dyadic pd = Dyadic::ratio(w_d, d.log2_den);
    Dyadic gap = abs_diff(pu, pd);
    if (rhs < gap) rhs = gap;

    u128 a = (u128)cnt_u << d.log2_den;  // common denominator 2^{m + lgD}
    u128 bb = w_d << m;
    u128 wp = d_prime.weights[zv];
    if (a >= bb)
      lhs_num_pos += wp * (a - bb);
    else
      lhs_num_neg += wp * (bb - a);
  }
  u128 lhs_num = lhs_num_pos >= lhs_num_neg ? lhs_num_pos - lhs_num_neg : lhs_num_neg - lhs_num_pos;
  HybridReport rep;
  rep.product_gap = Dyadic::ratio(lhs_num, m + d.log2_den + d_prime.log2_den);
  rep.max_restricted_gap = rhs;
  rep.holds = rep.product_gap <= rep.max_restricted_gap;
  return rep;
}

}  // namespace obp
