#include "obp/inw.hpp"

#include <cassert>
#include <cmath>

#include "obp/expander.hpp"

namespace obp {

namespace {
constexpr int kToyAuxBits = 4;
}

const char* name(InwMode m) {
  switch (m) {
    case InwMode::expander: return "expander";
    case InwMode::hash: return "hash";
    case InwMode::toy: return "toy";
    case InwMode::uniform: return "uniform";
  }
  return "?";
}

InwMode inw_mode_from(const std::string& s) {
  if (s == "expander") return InwMode::expander;
  if (s == "hash") return InwMode::hash;
  if (s == "toy") return InwMode::toy;
  if (s == "uniform") return InwMode::uniform;
  fail(Error::Code::invalid_params, "unknown generator mode: " + s);
}

int ceil_log2(int64_t v) {
  assert(v >= 1);
  int t = 0;
  while ((int64_t{1} << t) < v) ++t;
  return t;
}

int ceil_log2_ratio(double num, double den) {
  if (!(num > 0) || !(den > 0)) fail(Error::Code::invalid_params, "ceil_log2_ratio needs positive arguments");
  double r = num / den;
  int t = (int)std::ceil(std::log2(r));
  while (std::ldexp(1.0, t) < r) ++t;
  while (t > 0 && std::ldexp(1.0, t - 1) >= r) --t;
  return std::max(t, 0);
}

InwDescriptor InwDescriptor::build(int64_t n_out, int d, int w, double eps, InwMode mode) {
  if (n_out < 1 || d < 1 || w < 2 || !(eps > 0.0 && eps < 1.0))
    fail(Error::Code::invalid_params, "generator parameters: need n_out >= 1, d >= 1, w >= 2, eps in (0,1)");
  InwDescriptor g;
  g.n_out_ = n_out;
  g.d_ = d;
  g.w_ = w;
  g.eps_ = eps;
  g.mode_ = mode;
  g.budget_bits_ = d * ceil_log2(w) + ceil_log2_ratio(2.0 * (double)n_out, eps);
  if (mode == InwMode::expander) {
    double per_step = std::log2(1.0 / ExpanderSpec::base_lambda_bound);
    g.walk_steps_ = (int)std::ceil((double)g.budget_bits_ / per_step);
  }
  if (mode == InwMode::uniform) {
    g.seed_len_ = n_out;
    return g;
  }
  // widths for every interval length reachable by ceil/floor halving
  std::vector<int64_t> todo{n_out};
  while (!todo.empty()) {
    int64_t len = todo.back();
    todo.pop_back();
    if (g.width_.count(len)) continue;
    g.width_[len] = 0;  // mark
    if (len > 1) {
      todo.push_back((len + 1) / 2);
      todo.push_back(len / 2);
    }
  }
  for (auto& [len, width] : g.width_) {  // map is ordered, children precede parents
    if (len == 1) {
      width = 1;
      continue;
    }
    width = g.width_.at((len + 1) / 2) + g.aux_width(len);
  }
  g.seed_len_ = g.width_.at(n_out);
  return g;
}

int64_t InwDescriptor::sub_seed_width(int64_t len) const {
  auto it = width_.find(len);
  if (it == width_.end()) fail(Error::Code::invalid_params, "no node of length " + std::to_string(len));
  return it->second;
}

int64_t InwDescriptor::aux_width(int64_t len) const {
  assert(len >= 2);
  switch (mode_) {
    case InwMode::toy:
      return kToyAuxBits;
    case InwMode::expander:
      return 3 * (int64_t)walk_steps_;
    case InwMode::hash: {
      int64_t lifted = std::max(width_.at((len + 1) / 2), (int64_t)budget_bits_);
      return 3 * lifted - 1;  // Toeplitz diagonal (2W-1) plus offset (W)
    }
    case InwMode::uniform:
      break;
  }
  fail(Error::Code::invalid_params, "uniform mode has no auxiliary words");
}

std::vector<std::array<int64_t, 3>> InwDescriptor::level_widths() const {
  std::vector<std::array<int64_t, 3>> out;
  for (const auto& [len, width] : width_) out.push_back({len, width, len >= 2 ? aux_width(len) : 0});
  return out;
}

Bits InwDescriptor::expand(const Bits& seed) const {
  if ((int64_t)seed.size() != seed_len_)
    fail(Error::Code::seed_length_mismatch,
         "seed length " + std::to_string(seed.size()) + ", expected " + std::to_string(seed_len_));
  if (mode_ == InwMode::uniform) return seed;
  Bits out((size_t)n_out_);
  expand_node(0, n_out_, seed, out);
  return out;
}

void InwDescriptor::expand_node(int64_t out_off, int64_t len, const Bits& sub, Bits& out) const {
  if (len == 1) {
    out.set((size_t)out_off, sub.get(0));
    return;
  }
  int64_t left = (len + 1) / 2, right = len - left;
  int64_t wl = width_.at(left);
  int64_t a = aux_width(len);
  assert((int64_t)sub.size() == wl + a);
  Bits core = sub.slice(0, (size_t)wl);
  Bits aux = sub.slice((size_t)wl, (size_t)a);
  expand_node(out_off, left, core, out);
  Bits derived = derive(core, aux, width_.at(right));
  expand_node(out_off + left, right, derived, out);
}

Bits InwDescriptor::derive(const Bits& core, const Bits& aux, int64_t out_width) const {
  switch (mode_) {
    case InwMode::toy: {
      // rotate by the low aux bits, mask with the high ones, and one AND term;
      // a plain XOR fold is linear over GF(2) and expands to exactly uniform
      // output on full-rank parts, which makes regression baselines vacuous
      size_t w = core.size();
      size_t rot = (aux.get(0) ? 1 : 0) + (aux.get(1) ? 2 : 0);
      Bits r(w);
      for (size_t i = 0; i < w; ++i) r.set(i, core.get((i + rot) % w) ^ aux.get(2 + (i & 1)));
      if (w >= 3) r.set(0, r.get(0) ^ (r.get(1) & r.get(2)));
      return r.slice(0, (size_t)out_width);
    }
    case InwMode::hash: {
      size_t lifted = (size_t)std::max<int64_t>((int64_t)core.size(), budget_bits_);
      Bits x = core.resized(lifted);
      Bits diag = aux.slice(0, 2 * lifted - 1);
      Bits offset = aux.slice(2 * lifted - 1, lifted);
      Bits r((size_t)out_width);
      for (int64_t i = 0; i < out_width; ++i)
        r.set((size_t)i, offset.get((size_t)i) ^ parity_and(x, diag.slice((size_t)i, lifted)));
      return r;
    }
    case InwMode::expander: {
      int cb = (int)((core.size() + 1) / 2);
      Bits vertex = core.resized(2 * (size_t)cb);
      Bits v = expander_walk(vertex, aux, cb);
      return v.slice(0, (size_t)out_width);
    }
    case InwMode::uniform:
      break;
  }
  fail(Error::Code::invalid_params, "uniform mode derives nothing");
}

std::string InwDescriptor::id() const {
  return std::string("inw[") + name(mode_) + ",n=" + std::to_string(n_out_) + ",d=" + std::to_string(d_) +
         ",w=" + std::to_string(w_) + ",s=" + std::to_string(seed_len_) + "]";
}

nlohmann::json InwDescriptor::to_json() const {
  nlohmann::json j;
  j["type"] = "inw";
  j["mode"] = name(mode_);
  j["n_out"] = n_out_;
  j["d"] = d_;
  j["w"] = w_;
  j["eps"] = eps_;
  j["seed_len"] = seed_len_;
  j["budget_bits"] = budget_bits_;
  j["walk_steps"] = walk_steps_;
  auto& levels = j["levels"] = nlohmann::json::array();
  for (const auto& lv : level_widths()) levels.push_back({{"len", lv[0]}, {"width", lv[1]}, {"aux", lv[2]}});
  return j;
}

InwDescriptor InwDescriptor::from_json(const nlohmann::json& j) {
  try {
    if (j.at("type").get<std::string>() != "inw") fail(Error::Code::parse_error, "not an inw descriptor");
    InwDescriptor g = build(j.at("n_out").get<int64_t>(), j.at("d").get<int>(), j.at("w").get<int>(),
                            j.at("eps").get<double>(), inw_mode_from(j.at("mode").get<std::string>()));
    // a rebuilt descriptor must agree bit for bit with the stored layout
    if (g.seed_len_ != j.at("seed_len").get<int64_t>())
      fail(Error::Code::parse_error, "stored seed length disagrees with the rebuilt layout");
    if (j.contains("levels")) {
      auto lv = g.level_widths();
      if (j.at("levels").size() != lv.size()) fail(Error::Code::parse_error, "stored level count disagrees");
      size_t i = 0;
      for (const auto& l : j.at("levels")) {
        if (l.at("len").get<int64_t>() != lv[i][0] || l.at("width").get<int64_t>() != lv[i][1] ||
            l.at("aux").get<int64_t>() != lv[i][2])
          fail(Error::Code::parse_error, "stored level widths disagree with the rebuilt layout");
        ++i;
      }
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    fail(Error::Code::parse_error, std::string("bad inw json: ") + e.what());
  }
}

}  // namespace obp
