#include "obp/composite.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace obp {

const char* name(CompositeKind k) { return k == CompositeKind::read_k ? "read_k" : "linear_length"; }

int linear_length_read_bound(int n) {
  if (n < 4) fail(Error::Code::invalid_params, "linear-length construction needs n >= 4");
  int inner = (int)std::floor(std::log2((double)n));
  int outer = (int)std::floor(std::log2((double)inner));
  return std::max(1, outer / 2);
}

int CompositeDescriptor::coordinate(int var) const {
  auto it = std::lower_bound(output_vars_.begin(), output_vars_.end(), var);
  assert(it != output_vars_.end() && *it == var);
  return (int)(it - output_vars_.begin());
}

CompositeDescriptor CompositeDescriptor::build_read_k(const ReadKSequence& s, int w, double eps, InwMode mode) {
  if (s.support_size() < 1) fail(Error::Code::invalid_params, "empty sequence");
  if (w < 2 || !(eps > 0.0 && eps < 1.0)) fail(Error::Code::invalid_params, "need w >= 2 and eps in (0,1)");
  CompositeDescriptor g;
  g.kind_ = CompositeKind::read_k;
  g.k_ = s.k();
  g.w_ = w;
  g.eps_ = eps;
  g.mode_ = mode;
  g.output_vars_ = s.support();
  g.source_.n = s.support().back() + 1;
  g.source_.elems = s.elems();

  auto partition = partition_variables(s);
  verify_partition(s, partition);
  int n = s.support_size();
  int d = 2 * s.k();
  double eps_part = eps / n;

  std::vector<std::vector<int>> parts;
  for (auto& p : partition.parts) parts.push_back(p.vars);
  // seed layout ordered by each part's smallest variable
  std::sort(parts.begin(), parts.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) { return a.front() < b.front(); });

  int64_t offset = 0;
  for (auto& vars : parts) {
    // the mixing generator's hypothesis: bounded head visits on the part
    auto prof = head_visit_profile(s.restricted(vars));
    if (prof.max_visits > d)
      fail(Error::Code::certificate_violation, "part exceeds the visit bound 2k");
    InwDescriptor inw = InwDescriptor::build((int64_t)vars.size(), d, w, eps_part, mode);
    int64_t len = inw.seed_length();
    g.parts_.push_back({std::move(vars), std::move(inw), offset});
    offset += len;
  }
  g.frequent_offset_ = offset;
  g.seed_len_ = offset;
  return g;
}

CompositeDescriptor CompositeDescriptor::build_linear_length(const LabelSequence& s, int w, double eps,
                                                             InwMode mode) {
  if (w < 2 || !(eps > 0.0 && eps < 1.0)) fail(Error::Code::invalid_params, "need w >= 2 and eps in (0,1)");
  int n = s.n;
  auto counts = s.counts();
  int k = linear_length_read_bound(n);

  std::vector<int> frequent, rest;
  for (int v = 0; v < n; ++v) (counts[v] > k ? frequent : rest).push_back(v);
  // each frequent variable eats more than k occurrences of the sequence
  assert((int64_t)frequent.size() * k <= (int64_t)s.elems.size());

  CompositeDescriptor g;
  g.kind_ = CompositeKind::linear_length;
  g.k_ = k;
  g.w_ = w;
  g.eps_ = eps;
  g.mode_ = mode;
  g.source_ = s;
  g.frequent_ = frequent;
  g.freq_threshold_ = k;
  g.output_vars_.resize(n);
  for (int v = 0; v < n; ++v) g.output_vars_[v] = v;

  int64_t offset = 0;
  if (!rest.empty()) {
    // keep only infrequent occurrences, then append the missing reads of each
    // infrequent variable at the end so the result is exactly read-k
    std::vector<uint8_t> is_rest(n, 0);
    for (int v : rest) is_rest[v] = 1;
    std::vector<int> padded;
    for (int v : s.elems)
      if (is_rest[v]) padded.push_back(v);
    for (int v : rest)
      for (int c = counts[v]; c < k; ++c) padded.push_back(v);
    ReadKSequence sub = ReadKSequence::from_parts(std::move(padded), rest, k);

    CompositeDescriptor inner = build_read_k(sub, w, eps, mode);
    g.parts_ = std::move(inner.parts_);
    offset = inner.seed_len_;
  }
  g.frequent_offset_ = offset;
  g.seed_len_ = offset + (int64_t)frequent.size();
  return g;
}

Bits CompositeDescriptor::expand(const Bits& seed) const {
  if ((int64_t)seed.size() != seed_len_)
    fail(Error::Code::seed_length_mismatch,
         "seed length " + std::to_string(seed.size()) + ", expected " + std::to_string(seed_len_));
  Bits out(output_vars_.size());
  for (const auto& p : parts_) {
    Bits sub = seed.slice((size_t)p.seed_offset, (size_t)p.inw.seed_length());
    Bits bits = p.inw.expand(sub);
    for (size_t j = 0; j < p.vars.size(); ++j) out.set((size_t)coordinate(p.vars[j]), bits.get(j));
  }
  for (size_t j = 0; j < frequent_.size(); ++j)
    out.set((size_t)coordinate(frequent_[j]), seed.get((size_t)(frequent_offset_ + j)));
  return out;
}

SeedLengthReport CompositeDescriptor::seed_report() const {
  SeedLengthReport r;
  r.n = (int)output_vars_.size();
  r.k = k_;
  r.w = w_;
  r.eps = eps_;
  r.t = (int)parts_.size();
  for (const auto& p : parts_) r.part_seed_lengths.push_back(p.inw.seed_length());
  r.frequent_bits = (int64_t)frequent_.size();
  r.total = seed_len_;
  double n = std::max(2, r.n);
  r.envelope = (double)r.t * std::log2(n) * (std::log2(n / eps_) + (double)k_ * std::log2((double)w_));
  return r;
}

std::string CompositeDescriptor::id() const {
  return std::string(name(kind_)) + "[" + name(mode_) + ",n=" + std::to_string(output_vars_.size()) +
         ",k=" + std::to_string(k_) + ",w=" + std::to_string(w_) + ",t=" + std::to_string(parts_.size()) +
         ",s=" + std::to_string(seed_len_) + "]";
}

nlohmann::json CompositeDescriptor::to_json() const {
  nlohmann::json j;
  j["type"] = "composite";
  j["kind"] = name(kind_);
  j["mode"] = name(mode_);
  j["n"] = source_.n;
  j["k"] = k_;
  j["w"] = w_;
  j["eps"] = eps_;
  j["seed_len"] = seed_len_;
  std::vector<int> elems1;
  for (int v : source_.elems) elems1.push_back(v + 1);
  j["sequence"] = {{"n", source_.n}, {"elems", elems1}};
  if (kind_ == CompositeKind::read_k) {
    j["sequence"]["k"] = k_;
    if ((int)output_vars_.size() != source_.n) {
      auto& sup = j["sequence"]["support"] = nlohmann::json::array();
      for (int v : output_vars_) sup.push_back(v + 1);
    }
  }
  j["frequent"] = nlohmann::json::array();
  for (int v : frequent_) j["frequent"].push_back(v + 1);
  j["frequent_threshold"] = freq_threshold_;
  auto& parts = j["parts"] = nlohmann::json::array();
  for (const auto& p : parts_) {
    nlohmann::json pj;
    pj["vars"] = nlohmann::json::array();
    for (int v : p.vars) pj["vars"].push_back(v + 1);
    pj["seed_offset"] = p.seed_offset;
    pj["inw"] = p.inw.to_json();
    parts.push_back(std::move(pj));
  }
  return j;
}

CompositeDescriptor CompositeDescriptor::from_json(const nlohmann::json& j) {
  try {
    if (j.at("type").get<std::string>() != "composite") fail(Error::Code::parse_error, "not a composite descriptor");
    std::string kind = j.at("kind").get<std::string>();
    InwMode mode = inw_mode_from(j.at("mode").get<std::string>());
    int w = j.at("w").get<int>();
    double eps = j.at("eps").get<double>();
    LabelSequence seq;
    seq.n = j.at("sequence").at("n").get<int>();
    for (int v : j.at("sequence").at("elems").get<std::vector<int>>()) seq.elems.push_back(v - 1);

    CompositeDescriptor g;
    if (kind == "read_k") {
      int k = j.at("sequence").at("k").get<int>();
      if (j.at("sequence").contains("support")) {
        std::vector<int> support;
        for (int v : j.at("sequence").at("support").get<std::vector<int>>()) support.push_back(v - 1);
        g = build_read_k(ReadKSequence::from_parts(seq.elems, support, k), w, eps, mode);
      } else {
        g = build_read_k(ReadKSequence::validate(seq.elems, seq.n, k), w, eps, mode);
      }
    } else if (kind == "linear_length") {
      g = build_linear_length(seq, w, eps, mode);
    } else {
      fail(Error::Code::parse_error, "unknown composite kind: " + kind);
    }
    // rebuilt layout must agree with the stored one
    if (g.seed_len_ != j.at("seed_len").get<int64_t>())
      fail(Error::Code::parse_error, "stored seed length disagrees with the rebuilt layout");
    if (j.at("parts").size() != g.parts_.size()) fail(Error::Code::parse_error, "stored part count disagrees");
    size_t i = 0;
    for (const auto& pj : j.at("parts")) {
      std::vector<int> vars;
      for (int v : pj.at("vars").get<std::vector<int>>()) vars.push_back(v - 1);
      if (vars != g.parts_[i].vars || pj.at("seed_offset").get<int64_t>() != g.parts_[i].seed_offset)
        fail(Error::Code::parse_error, "stored partition disagrees with the rebuilt one");
      ++i;
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    fail(Error::Code::parse_error, std::string("bad composite json: ") + e.what());
  }
}

}  // namespace obp
