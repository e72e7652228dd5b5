#include "obp/program.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <numeric>
#include <thread>

namespace obp {

ObliviousProgram::ObliviousProgram(int n, int w, std::vector<Layer> layers, int start,
                                   const std::vector<int>& accepting)
    : n_(n), w_(w), start_(start), layers_(std::move(layers)) {
  if (n < 0 || w < 1) fail(Error::Code::invalid_params, "need n >= 0 and width >= 1");
  if (start < 0 || start >= w) fail(Error::Code::invalid_params, "start state out of range");
  for (const auto& l : layers_) {
    if (l.var < 0 || l.var >= n) fail(Error::Code::invalid_params, "layer variable out of range");
    if ((int)l.next0.size() != w || (int)l.next1.size() != w)
      fail(Error::Code::invalid_params, "transition maps must have length w");
    for (int s : l.next0)
      if (s < 0 || s >= w) fail(Error::Code::invalid_params, "transition target out of range");
    for (int s : l.next1)
      if (s < 0 || s >= w) fail(Error::Code::invalid_params, "transition target out of range");
  }
  accepting_.assign(w, 0);
  for (int s : accepting) {
    if (s < 0 || s >= w) fail(Error::Code::invalid_params, "accepting state out of range");
    accepting_[s] = 1;
  }
}

std::vector<int> ObliviousProgram::accepting_states() const {
  std::vector<int> out;
  for (int s = 0; s < w_; ++s)
    if (accepting_[s]) out.push_back(s);
  return out;
}

bool ObliviousProgram::evaluate(const Bits& x) const {
  if ((int)x.size() != n_) fail(Error::Code::input_length_mismatch, "input length != n");
  int s = start_;
  for (const auto& l : layers_) s = x.get(l.var) ? l.next1[s] : l.next0[s];
  return accepting_[s];
}

bool ObliviousProgram::evaluate_u64(uint64_t x) const {
  assert(n_ <= 64);
  int s = start_;
  for (const auto& l : layers_) s = ((x >> l.var) & 1) ? l.next1[s] : l.next0[s];
  return accepting_[s];
}

ReadProfile read_profile(const ObliviousProgram& b) {
  ReadProfile p;
  p.labels.n = b.n();
  p.labels.elems.reserve(b.length());
  for (const auto& l : b.layers()) p.labels.elems.push_back(l.var);
  p.counts = p.labels.counts();
  p.k_max = p.counts.empty() ? 0 : *std::max_element(p.counts.begin(), p.counts.end());
  p.exact_k = b.n() > 0 && p.k_max > 0;
  for (int c : p.counts)
    if (c != p.k_max) p.exact_k = false;
  return p;
}

std::optional<ReadKSequence> read_sequence_if_exact(const ObliviousProgram& b) {
  auto p = read_profile(b);
  if (!p.exact_k) return std::nullopt;
  return ReadKSequence::validate(p.labels.elems, b.n(), p.k_max);
}

ObliviousProgram restrict_program(const ObliviousProgram& b, const Restriction& r) {
  if (r.values.size() != r.vars.size()) fail(Error::Code::invalid_params, "restriction value count mismatch");
  std::vector<int> fixed_val(b.n(), -1);
  for (size_t i = 0; i < r.vars.size(); ++i) {
    int v = r.vars[i];
    if (v < 0 || v >= b.n()) fail(Error::Code::invalid_params, "restricted variable out of range");
    if (fixed_val[v] != -1) fail(Error::Code::invalid_params, "variable restricted twice");
    fixed_val[v] = r.values.get(i);
  }
  std::vector<int> new_id(b.n(), -1);
  int next = 0;
  for (int v = 0; v < b.n(); ++v)
    if (fixed_val[v] < 0) new_id[v] = next++;

  int w = b.width();
  std::vector<int> pending(w);
  std::iota(pending.begin(), pending.end(), 0);
  bool have_pending = false;
  std::vector<Layer> layers;
  for (const auto& l : b.layers()) {
    if (fixed_val[l.var] >= 0) {
      const auto& map = fixed_val[l.var] ? l.next1 : l.next0;
      for (int s = 0; s < w; ++s) pending[s] = map[pending[s]];
      have_pending = true;
    } else {
      Layer nl;
      nl.var = new_id[l.var];
      nl.next0.resize(w);
      nl.next1.resize(w);
      for (int s = 0; s < w; ++s) {
        nl.next0[s] = l.next0[pending[s]];
        nl.next1[s] = l.next1[pending[s]];
      }
      layers.push_back(std::move(nl));
      std::iota(pending.begin(), pending.end(), 0);
      have_pending = false;
    }
  }
  std::vector<int> accepting;
  for (int s = 0; s < w; ++s) {
    int t = have_pending ? pending[s] : s;
    if (b.accepting_mask()[t]) accepting.push_back(s);
  }
  return ObliviousProgram(b.n() - (int)r.vars.size(), w, std::move(layers), b.start(), accepting);
}

Bits merge_assignment(int n, const Restriction& r, const Bits& free_values) {
  Bits x((size_t)n);
  std::vector<uint8_t> fixed(n, 0);
  for (size_t i = 0; i < r.vars.size(); ++i) {
    fixed[r.vars[i]] = 1;
    x.set(r.vars[i], r.values.get(i));
  }
  size_t j = 0;
  for (int v = 0; v < n; ++v)
    if (!fixed[v]) x.set(v, free_values.get(j++));
  if (j != free_values.size()) fail(Error::Code::invalid_params, "free value count mismatch");
  return x;
}

ObliviousProgram pad_to_exact_k(const ObliviousProgram& b) {
  auto prof = read_profile(b);
  int k = prof.k_max;
  std::vector<Layer> layers = b.layers();
  std::vector<int> identity(b.width());
  std::iota(identity.begin(), identity.end(), 0);
  for (int v = 0; v < b.n(); ++v)
    for (int c = prof.counts[v]; c < k; ++c) layers.push_back({v, identity, identity});
  return ObliviousProgram(b.n(), b.width(), std::move(layers), b.start(), b.accepting_states());
}

AcceptanceResult exhaustive_acceptance(const ObliviousProgram& b, int threads) {
  if (b.n() > 30) fail(Error::Code::too_large_for_exhaustive, "exhaustive enumeration capped at n = 30");
  uint64_t total = uint64_t{1} << b.n();
  threads = std::max(1, std::min<int>(threads, 64));
  std::vector<u128> counts(threads, 0);
  auto work = [&](int t) {
    uint64_t lo = total / threads * t + std::min<uint64_t>(t, total % threads);
    uint64_t hi = lo + total / threads + (t < (int)(total % threads) ? 1 : 0);
    u128 c = 0;
    for (uint64_t x = lo; x < hi; ++x) c += b.evaluate_u64(x);
    counts[t] = c;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  AcceptanceResult res;
  for (u128 c : counts) res.accepting += c;
  res.log2_total = b.n();
  res.probability = Dyadic::ratio(res.accepting, res.log2_total);
  res.method = CountMethod::exhaustive;
  return res;
}

AcceptanceResult read_once_acceptance(const ObliviousProgram& b) {
  auto prof = read_profile(b);
  if (prof.k_max > 1) fail(Error::Code::invalid_params, "layer DP needs a read-once program");
  if (b.length() > 120) fail(Error::Code::too_large_for_exhaustive, "read-once DP capped at 120 layers");
  std::vector<u128> cur(b.width(), 0), nxt(b.width());
  cur[b.start()] = 1;
  for (const auto& l : b.layers()) {
    std::fill(nxt.begin(), nxt.end(), 0);
    for (int s = 0; s < b.width(); ++s) {
      if (cur[s] == 0) continue;
      nxt[l.next0[s]] += cur[s];
      nxt[l.next1[s]] += cur[s];
    }
    cur.swap(nxt);
  }
  AcceptanceResult res;
  for (int s = 0; s < b.width(); ++s)
    if (b.accepting_mask()[s]) res.accepting += cur[s];
  res.log2_total = (int)b.length();
  res.probability = Dyadic::ratio(res.accepting, res.log2_total);
  res.method = CountMethod::read_once_dp;
  return res;
}

AcceptanceResult acceptance_probability_uniform(const ObliviousProgram& b, int input_cap) {
  auto prof = read_profile(b);
  if (prof.k_max <= 1 && b.length() <= 120) return read_once_acceptance(b);
  if (b.n() > input_cap)
    fail(Error::Code::too_large_for_exhaustive,
         "n = " + std::to_string(b.n()) + " exceeds the exhaustive cap " + std::to_string(input_cap) +
             "; use sampling");
  return exhaustive_acceptance(b);
}

ObliviousProgram build_address_function(int n_addr) {
  if (n_addr < 1 || (n_addr & (n_addr - 1)) != 0)
    fail(Error::Code::not_power_of_two, "address width must be a power of two");
  int lg = 0;
  while ((1 << lg) < n_addr) ++lg;
  int n = n_addr + lg;
  int w = n_addr + 2;  // selector values, then done-0 / done-1
  const int done0 = n_addr, done1 = n_addr + 1;
  std::vector<Layer> layers;
  std::vector<int> identity(w);
  std::iota(identity.begin(), identity.end(), 0);

  // first y pass: read but ignore
  for (int i = 0; i < n_addr; ++i) layers.push_back({i, identity, identity});
  // z pass: accumulate the selector, most significant bit first
  for (int bit = 0; bit < lg; ++bit) {
    Layer l;
    l.var = n_addr + bit;
    l.next0.resize(w);
    l.next1.resize(w);
    for (int s = 0; s < w; ++s) {
      int v0 = 2 * s, v1 = 2 * s + 1;
      l.next0[s] = v0 < w ? v0 : s;
      l.next1[s] = v1 < w ? v1 : s;
    }
    layers.push_back(std::move(l));
  }
  // second y pass: resolve the selected bit, then absorb
  for (int i = 0; i < n_addr; ++i) {
    Layer l;
    l.var = i;
    l.next0 = identity;
    l.next1 = identity;
    l.next0[i] = done0;
    l.next1[i] = done1;
    layers.push_back(std::move(l));
  }
  std::vector<int> accepting{done1};
  if (lg == 0) {
    // no z bits: selector stays 0, which is exactly state 0
  }
  return ObliviousProgram(n, w, std::move(layers), 0, accepting);
}

ObliviousProgram build_mod_counter(const LabelSequence& order, int modulus, int target) {
  if (modulus < 1) fail(Error::Code::invalid_params, "modulus must be >= 1");
  order.counts();  // validates label range
  int w = modulus;
  std::vector<Layer> layers;
  for (int v : order.elems) {
    Layer l;
    l.var = v;
    l.next0.resize(w);
    l.next1.resize(w);
    for (int s = 0; s < w; ++s) {
      l.next0[s] = s;
      l.next1[s] = (s + 1) % modulus;
    }
    layers.push_back(std::move(l));
  }
  return ObliviousProgram(order.n, w, std::move(layers), 0, {((target % modulus) + modulus) % modulus});
}

ObliviousProgram random_obp(const LabelSequence& order, int w, uint64_t seed) {
  if (w < 2) fail(Error::Code::invalid_params, "random programs need width >= 2");
  order.counts();
  Rng rng(seed);
  std::vector<Layer> layers;
  for (int v : order.elems) {
    Layer l;
    l.var = v;
    l.next0.resize(w);
    l.next1.resize(w);
    for (int s = 0; s < w; ++s) l.next0[s] = (int)rng.below(w);
    for (int s = 0; s < w; ++s) l.next1[s] = (int)rng.below(w);
    layers.push_back(std::move(l));
  }
  std::vector<int> accepting;
  for (int s = 0; s < w; ++s)
    if (rng.coin()) accepting.push_back(s);
  return ObliviousProgram(order.n, w, std::move(layers), (int)rng.below(w), accepting);
}

nlohmann::json program_to_json(const ObliviousProgram& b) {
  nlohmann::json j;
  j["type"] = "oblivious_program";
  j["n"] = b.n();
  j["w"] = b.width();
  j["start"] = b.start();
  j["accepting"] = b.accepting_states();
  auto& layers = j["layers"] = nlohmann::json::array();
  for (const auto& l : b.layers()) {
    nlohmann::json lj;
    lj["var"] = l.var + 1;  // 1-based in files
    lj["t0"] = l.next0;
    lj["t1"] = l.next1;
    layers.push_back(std::move(lj));
  }
  return j;
}

ObliviousProgram program_from_json(const nlohmann::json& j) {
  try {
    int n = j.at("n").get<int>();
    int w = j.at("w").get<int>();
    int start = j.at("start").get<int>();
    auto accepting = j.at("accepting").get<std::vector<int>>();
    std::vector<Layer> layers;
    for (const auto& lj : j.at("layers")) {
      Layer l;
      l.var = lj.at("var").get<int>() - 1;
      l.next0 = lj.at("t0").get<std::vector<int>>();
      l.next1 = lj.at("t1").get<std::vector<int>>();
      layers.push_back(std::move(l));
    }
    return ObliviousProgram(n, w, std::move(layers), start, accepting);
  } catch (const nlohmann::json::exception& e) {
    fail(Error::Code::parse_error, std::string("bad program json: ") + e.what());
  }
}

ObliviousProgram read_program_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Error::Code::io_error, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(Error::Code::parse_error, path.string() + ": " + e.what());
  }
  return program_from_json(j);
}

void write_program_file(const std::filesystem::path& path, const ObliviousProgram& b) {
  std::ofstream out(path);
  if (!out) fail(Error::Code::io_error, "cannot write " + path.string());
  out << program_to_json(b).dump(2) << "\n";
}

}  // namespace obp
