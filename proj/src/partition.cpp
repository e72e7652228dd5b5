#include "obp/partition.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <set>

namespace obp {

std::vector<size_t> longest_monotone_subsequence(std::span<const int> values, Direction dir) {
  size_t m = values.size();
  if (m == 0) return {};
  // work with increasing throughout; negate for decreasing
  std::vector<int> v(values.begin(), values.end());
  if (dir == Direction::decreasing)
    for (int& x : v) x = -x;

  // len_from[i] = length of the longest increasing run starting at i,
  // via patience piles over the reversed sequence.
  std::vector<int> len_from(m);
  std::vector<int> tails;  // tails[d] = largest value ending a length-(d+1) decreasing run of the scan
  tails.reserve(m);
  for (size_t r = 0; r < m; ++r) {
    size_t i = m - 1 - r;
    // longest strictly decreasing subsequence of v[m-1..i] equals the
    // longest increasing one of v[i..m-1]
    auto it = std::lower_bound(tails.begin(), tails.end(), v[i], [](int a, int b) { return a > b; });
    if (it == tails.end()) {
      tails.push_back(v[i]);
      len_from[i] = (int)tails.size();
    } else {
      *it = v[i];
      len_from[i] = (int)(it - tails.begin()) + 1;
    }
  }
  int best = *std::max_element(len_from.begin(), len_from.end());

  std::vector<size_t> idx;
  idx.reserve(best);
  int need = best;
  long long last = std::numeric_limits<long long>::min();
  for (size_t i = 0; i < m && need > 0; ++i) {
    if (len_from[i] == need && v[i] > last) {
      idx.push_back(i);
      last = v[i];
      --need;
    }
  }
  assert((int)idx.size() == best);
  return idx;
}

std::vector<int> extract_monotone_subset(const ReadKSequence& s) {
  if (s.support().empty()) return {};
  std::vector<int> cand = s.support();
  for (int read = 1; read <= s.k(); ++read) {
    // candidate in this read's occurrence order
    std::vector<std::pair<size_t, int>> by_pos;
    by_pos.reserve(cand.size());
    for (int v : cand) by_pos.push_back({s.occurrence_position(v, read), v});
    std::sort(by_pos.begin(), by_pos.end());
    std::vector<int> values;
    values.reserve(by_pos.size());
    for (auto& [p, v] : by_pos) values.push_back(v);

    auto inc = longest_monotone_subsequence(values, Direction::increasing);
    auto dec = longest_monotone_subsequence(values, Direction::decreasing);
    const auto& pick = inc.size() >= dec.size() ? inc : dec;
    std::vector<int> next;
    next.reserve(pick.size());
    for (size_t i : pick) next.push_back(values[i]);
    cand = std::move(next);
  }
  std::sort(cand.begin(), cand.end());
  return cand;
}

bool is_k_pass(const ReadKSequence& s) {
  size_t n = s.support().size();
  if (n == 0) return true;
  for (int pass = 0; pass < s.k(); ++pass) {
    std::set<int> seen(s.elems().begin() + pass * n, s.elems().begin() + (pass + 1) * n);
    if (seen.size() != n) return false;
  }
  return true;
}

namespace {

// Split a candidate set at a forced-block failure: the open firsts of the
// block that could not close go one way, the rest (always containing the
// occurrence that forced the close) go the other. Falls back to halving if
// the witness degenerates, which keeps termination unconditional.
std::pair<std::vector<int>, std::vector<int>> split_on_witness(const std::vector<int>& vars,
                                                               const KInterleavingReport& rep) {
  std::set<int> open;
  if (!rep.pairs.empty() && rep.pairs.back().report.witness)
    for (int v : rep.pairs.back().report.witness->open_firsts) open.insert(v);
  std::vector<int> a, b;
  for (int v : vars) (open.count(v) ? a : b).push_back(v);
  if (a.empty() || b.empty()) {
    a.assign(vars.begin(), vars.begin() + vars.size() / 2);
    b.assign(vars.begin() + vars.size() / 2, vars.end());
  }
  return {std::move(a), std::move(b)};
}

}  // namespace

VariablePartition partition_variables(const ReadKSequence& s) {
  VariablePartition out;
  out.k_pass_path = is_k_pass(s);
  std::vector<int> remaining = s.support();
  std::vector<std::vector<int>> parts;

  while (!remaining.empty()) {
    ReadKSequence rest = s.restricted(remaining);
    std::vector<int> y = extract_monotone_subset(rest);
    assert(!y.empty());
    if (out.k_pass_path) {
      // pass structure puts all i-th occurrences before all j-th ones, so
      // every restriction is regularly interleaving for free
      parts.push_back(y);
    } else {
      std::vector<std::vector<int>> work{y};
      while (!work.empty()) {
        std::vector<int> c = std::move(work.back());
        work.pop_back();
        if (c.size() == 1) {
          parts.push_back(std::move(c));
          continue;
        }
        auto rep = is_k_regularly_interleaving(s.restricted(c));
        if (rep.ok) {
          parts.push_back(std::move(c));
          continue;
        }
        auto [a, b] = split_on_witness(c, rep);
        work.push_back(std::move(a));
        work.push_back(std::move(b));
      }
    }
    std::set<int> taken(y.begin(), y.end());
    std::erase_if(remaining, [&](int v) { return taken.count(v) > 0; });
  }

  // certificates are recomputed, never assumed
  for (auto& vars : parts) {
    ReadKSequence r = s.restricted(vars);
    auto mono = is_per_read_monotone(r);
    if (!mono.ok) fail(Error::Code::certificate_violation, "part is not per-read-monotone");
    auto inter = is_k_regularly_interleaving(r);
    if (!inter.ok) fail(Error::Code::certificate_violation, "part is not k-regularly-interleaving");
    out.parts.push_back({std::move(vars), std::move(mono.directions), std::move(inter)});
  }
  if (out.parts.size() > (size_t)s.support_size())
    fail(Error::Code::certificate_violation, "more parts than variables");
  return out;
}

void verify_partition(const ReadKSequence& s, const VariablePartition& p) {
  std::set<int> seen;
  for (const auto& part : p.parts) {
    if (part.vars.empty()) fail(Error::Code::certificate_violation, "empty part");
    for (int v : part.vars)
      if (!seen.insert(v).second) fail(Error::Code::certificate_violation, "parts are not disjoint");
    ReadKSequence r = s.restricted(part.vars);
    if (!is_per_read_monotone(r).ok) fail(Error::Code::certificate_violation, "stored part fails monotonicity");
    if (!is_k_regularly_interleaving(r).ok) fail(Error::Code::certificate_violation, "stored part fails interleaving");
  }
  if ((int)seen.size() != s.support_size()) fail(Error::Code::certificate_violation, "parts do not cover the support");
}

}  // namespace obp
