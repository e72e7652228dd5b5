#include "obp/sequence.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <set>
#include <sstream>

namespace obp {

const char* name(Direction d) { return d == Direction::increasing ? "increasing" : "decreasing"; }

std::vector<int> LabelSequence::counts() const {
  std::vector<int> c(n, 0);
  for (int v : elems) {
    if (v < 0 || v >= n) fail(Error::Code::invalid_params, "label out of range: " + std::to_string(v));
    ++c[v];
  }
  return c;
}

ReadKSequence ReadKSequence::validate(std::vector<int> elems, int n, int k) {
  if (n < 0 || k < 1) fail(Error::Code::invalid_params, "need n >= 0 and k >= 1");
  if (elems.size() != (size_t)n * (size_t)k)
    fail(Error::Code::length_mismatch, "expected " + std::to_string((size_t)n * k) + " elements, got " +
                                           std::to_string(elems.size()));
  std::vector<int> cnt(n, 0);
  for (int v : elems) {
    if (v < 0 || v >= n) fail(Error::Code::invalid_params, "variable out of range: " + std::to_string(v));
    ++cnt[v];
  }
  for (int v = 0; v < n; ++v)
    if (cnt[v] != k)
      fail(Error::Code::wrong_multiplicity,
           "variable " + std::to_string(v) + " occurs " + std::to_string(cnt[v]) + " times, expected " +
               std::to_string(k));
  std::vector<int> support(n);
  for (int v = 0; v < n; ++v) support[v] = v;
  return from_parts(std::move(elems), std::move(support), k);
}

ReadKSequence ReadKSequence::from_parts(std::vector<int> elems, std::vector<int> support, int k) {
  ReadKSequence s;
  s.k_ = k;
  s.elems_ = std::move(elems);
  s.support_ = std::move(support);
  assert(std::is_sorted(s.support_.begin(), s.support_.end()));
  assert(s.elems_.size() == s.support_.size() * (size_t)k);
  s.index();
  return s;
}

void ReadKSequence::index() {
  int max_id = support_.empty() ? -1 : support_.back();
  rank_.assign(max_id + 1, -1);
  for (size_t r = 0; r < support_.size(); ++r) rank_[support_[r]] = (int)r;
  occ_.assign(support_.size(), {});
  for (auto& o : occ_) o.reserve(k_);
  read_of_.resize(elems_.size());
  for (size_t p = 0; p < elems_.size(); ++p) {
    int v = elems_[p];
    assert(v >= 0 && v <= max_id && rank_[v] >= 0);
    auto& o = occ_[rank_[v]];
    o.push_back(p);
    read_of_[p] = (int)o.size();
  }
  for ([[maybe_unused]] auto& o : occ_) assert((int)o.size() == k_);
}

bool ReadKSequence::dense() const {
  for (size_t r = 0; r < support_.size(); ++r)
    if (support_[r] != (int)r) return false;
  return true;
}

int ReadKSequence::rank_of(int var) const {
  if (var < 0 || var >= (int)rank_.size() || rank_[var] < 0)
    fail(Error::Code::invalid_params, "variable not in support: " + std::to_string(var));
  return rank_[var];
}

size_t ReadKSequence::occurrence_position(int var, int read) const {
  if (read < 1 || read > k_) fail(Error::Code::read_index_out_of_range, "read index " + std::to_string(read));
  return occ_[rank_of(var)][read - 1];
}

int ReadKSequence::read_index_of(size_t pos) const {
  assert(pos < elems_.size());
  return read_of_[pos];
}

ReadKSequence ReadKSequence::restricted(std::span<const int> vars) const {
  std::set<int> keep;
  for (int v : vars)
    if (v >= 0 && v < (int)rank_.size() && rank_[v] >= 0) keep.insert(v);
  std::vector<int> sub;
  sub.reserve(keep.size() * (size_t)k_);
  for (int v : elems_)
    if (keep.count(v)) sub.push_back(v);
  return from_parts(std::move(sub), std::vector<int>(keep.begin(), keep.end()), k_);
}

ReadKSequence ReadKSequence::pair_view(int read_i, int read_j) const {
  if (read_i < 1 || read_j < 1 || read_i > k_ || read_j > k_ || read_i == read_j)
    fail(Error::Code::read_index_out_of_range,
         "pair (" + std::to_string(read_i) + "," + std::to_string(read_j) + ") with k=" + std::to_string(k_));
  std::vector<int> sub;
  sub.reserve(support_.size() * 2);
  for (size_t p = 0; p < elems_.size(); ++p)
    if (read_of_[p] == read_i || read_of_[p] == read_j) sub.push_back(elems_[p]);
  return from_parts(std::move(sub), support_, 2);
}

std::string ReadKSequence::to_string() const {
  std::string s = "(";
  for (size_t i = 0; i < elems_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(elems_[i]);
  }
  return s + ")";
}

OccurrenceView occurrence_view(const ReadKSequence& s, int read) {
  if (read < 1 || read > s.k()) fail(Error::Code::read_index_out_of_range, "read index " + std::to_string(read));
  OccurrenceView v;
  v.read_index = read;
  v.order.reserve(s.support_size());
  for (size_t p = 0; p < s.length(); ++p)
    if (s.read_index_of(p) == read) v.order.push_back(s.elems()[p]);
  return v;
}

RelabelResult canonical_relabel(const ReadKSequence& s) {
  int max_id = s.support().empty() ? -1 : s.support().back();
  std::vector<int> new_id(max_id + 1, -1);
  int next = 0;
  for (int v : s.elems())
    if (new_id[v] < 0) new_id[v] = next++;
  std::vector<int> elems;
  elems.reserve(s.length());
  for (int v : s.elems()) elems.push_back(new_id[v]);
  RelabelResult r{ReadKSequence::validate(std::move(elems), s.support_size(), s.k()), {}};
  for (int v : s.support()) r.mapping.push_back({v, new_id[v]});
  return r;
}

PerReadMonotoneReport is_per_read_monotone(const ReadKSequence& s) {
  PerReadMonotoneReport rep;
  int n = s.support_size();
  for (int read = 1; read <= s.k(); ++read) {
    auto view = occurrence_view(s, read).order;
    if (n <= 1) {
      rep.directions.push_back(Direction::increasing);
      continue;
    }
    Direction dir = view[1] > view[0] ? Direction::increasing : Direction::decreasing;
    for (size_t i = 1; i < view.size(); ++i) {
      bool up = view[i] > view[i - 1];
      if (up != (dir == Direction::increasing)) {
        rep.ok = false;
        rep.witness = MonotoneWitness{read, i, view[i - 1], view[i]};
        rep.directions.clear();
        return rep;
      }
    }
    rep.directions.push_back(dir);
  }
  rep.ok = true;
  return rep;
}

InterleavingReport is_2_regularly_interleaving(const ReadKSequence& s) {
  if (s.k() != 2) fail(Error::Code::invalid_params, "interleaving check needs a read-2 sequence");
  InterleavingReport rep;
  std::set<int> open, closed;
  size_t block_begin = 0;
  auto emit = [&](size_t end) {
    InterleavingBlock b;
    b.vars.assign(open.begin(), open.end());
    b.begin = block_begin;
    b.end = end;
    rep.blocks.push_back(std::move(b));
    open.clear();
    closed.clear();
    block_begin = end;
  };
  for (size_t p = 0; p < s.length(); ++p) {
    int v = s.elems()[p];
    if (s.read_index_of(p) == 1) {
      if (!closed.empty()) {
        // a first occurrence after seconds began forces the block to close
        if (open != closed) {
          rep.witness = InterleavingWitness{p, {open.begin(), open.end()}, {closed.begin(), closed.end()}};
          return rep;
        }
        emit(p);
      }
      open.insert(v);
    } else {
      // the matching first occurrence is always in the current block
      assert(open.count(v));
      closed.insert(v);
    }
  }
  if (!open.empty()) {
    // multiplicity 2 guarantees the final block is complete
    assert(open == closed);
    emit(s.length());
  }
  rep.ok = true;
  return rep;
}

KInterleavingReport is_k_regularly_interleaving(const ReadKSequence& s) {
  KInterleavingReport rep;
  for (int i = 1; i <= s.k(); ++i)
    for (int j = i + 1; j <= s.k(); ++j) {
      PairInterleaving pi;
      pi.read_i = i;
      pi.read_j = j;
      pi.report = is_2_regularly_interleaving(s.pair_view(i, j));
      bool ok = pi.report.ok;
      rep.pairs.push_back(std::move(pi));
      if (!ok) {
        rep.ok = false;
        return rep;
      }
    }
  rep.ok = true;
  return rep;
}

MonotoneDecompositionResult monotone_decomposition(const ReadKSequence& s) {
  auto mono = is_per_read_monotone(s);
  if (!mono.ok) fail(Error::Code::not_per_read_monotone, "sequence is not per-read-monotone");
  MonotoneDecompositionResult out;
  if (s.empty()) return out;
  if (s.support_size() <= 1) {
    out.segments.push_back({0, s.length(), Direction::increasing, 1});
    return out;
  }
  // maximal runs of same-direction reads
  struct Run {
    int first_read, last_read;
    Direction dir;
  };
  std::vector<Run> runs;
  for (int r = 1; r <= s.k(); ++r) {
    Direction d = mono.directions[r - 1];
    if (runs.empty() || runs.back().dir != d)
      runs.push_back({r, r, d});
    else
      runs.back().last_read = r;
  }
  // each run must occupy one contiguous chunk, in run order
  std::vector<size_t> lo(runs.size(), s.length()), hi(runs.size(), 0);
  for (size_t p = 0; p < s.length(); ++p) {
    int read = s.read_index_of(p);
    size_t run = 0;
    while ((int)read > runs[run].last_read) ++run;
    lo[run] = std::min(lo[run], p);
    hi[run] = std::max(hi[run], p);
  }
  for (size_t r = 0; r + 1 < runs.size(); ++r)
    if (hi[r] >= lo[r + 1])
      fail(Error::Code::segment_assignment,
           "reads of segment " + std::to_string(r + 1) + " overlap segment " + std::to_string(r + 2));
  for (size_t r = 0; r < runs.size(); ++r)
    out.segments.push_back({lo[r], hi[r] + 1, runs[r].dir, runs[r].first_read});
  return out;
}

HeadWalkProfile head_visit_profile(const ReadKSequence& s, std::span<const int> tape_order) {
  if (tape_order.size() != (size_t)s.support_size())
    fail(Error::Code::tape_mismatch, "tape order must cover the support exactly");
  int max_id = s.support().empty() ? -1 : s.support().back();
  std::vector<int> cell(max_id + 1, -1);
  for (size_t c = 0; c < tape_order.size(); ++c) {
    int v = tape_order[c];
    if (v < 0 || v > max_id || cell[v] != -1) fail(Error::Code::tape_mismatch, "tape order is not a permutation of the support");
    cell[v] = (int)c;
  }
  for (int v : s.support())
    if (cell[v] < 0) fail(Error::Code::tape_mismatch, "tape order misses variable " + std::to_string(v));

  HeadWalkProfile prof;
  prof.tape_order.assign(tape_order.begin(), tape_order.end());
  prof.stops.assign(tape_order.size(), 0);
  prof.visits.assign(tape_order.size(), 0);
  if (s.empty()) return prof;

  std::vector<int64_t> diff(tape_order.size() + 1, 0);
  int prev = -1;
  for (size_t p = 0; p < s.length(); ++p) {
    int c = cell[s.elems()[p]];
    ++prof.stops[c];
    if (prev >= 0) {
      int a = std::min(prev, c), b = std::max(prev, c);
      if (b - a >= 2) {  // strict pass-throughs on (a, b)
        ++diff[a + 1];
        --diff[b];
      }
    }
    prev = c;
  }
  int64_t acc = 0;
  for (size_t c = 0; c < prof.visits.size(); ++c) {
    acc += diff[c];
    prof.visits[c] = prof.stops[c] + acc;
    prof.max_visits = std::max(prof.max_visits, prof.visits[c]);
  }
  return prof;
}

HeadWalkProfile head_visit_profile(const ReadKSequence& s) { return head_visit_profile(s, s.support()); }

namespace {

struct Tokenizer {
  std::istream& in;
  int line = 0;
  std::vector<std::string> tokens;
  size_t next = 0;

  explicit Tokenizer(std::istream& i) : in(i) {}

  bool refill() {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw.resize(hash);
      std::istringstream ss(raw);
      std::string t;
      tokens.clear();
      next = 0;
      while (ss >> t) tokens.push_back(t);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  bool get(long long& out, const char* what) {
    while (next >= tokens.size())
      if (!refill()) return false;
    const std::string& t = tokens[next++];
    try {
      size_t used = 0;
      out = std::stoll(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      fail(Error::Code::parse_error,
           std::string("line ") + std::to_string(line) + ": expected " + what + ", got '" + t + "'");
    }
    return true;
  }

  long long require(const char* what) {
    long long v;
    if (!get(v, what)) fail(Error::Code::parse_error, std::string("unexpected end of file, expected ") + what);
    return v;
  }
};

std::pair<LabelSequence, int> parse_sequence_stream(std::istream& in, const std::string& origin) {
  Tokenizer tok(in);
  long long n = tok.require("variable count n");
  long long k = tok.require("read count k");
  if (n < 0 || n > 1'000'000 || k < 0 || k > 1'000'000)
    fail(Error::Code::parse_error, origin + ": implausible header n=" + std::to_string(n) + " k=" + std::to_string(k));
  LabelSequence seq;
  seq.n = (int)n;
  long long v;
  while (tok.get(v, "variable id")) {
    if (v < 1 || v > n)
      fail(Error::Code::parse_error,
           origin + " line " + std::to_string(tok.line) + ": variable id " + std::to_string(v) + " outside 1.." +
               std::to_string(n));
    seq.elems.push_back((int)v - 1);
  }
  return {std::move(seq), (int)k};
}

}  // namespace

ReadKSequence read_sequence_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Error::Code::io_error, "cannot open " + path.string());
  auto [seq, k] = parse_sequence_stream(in, path.filename().string());
  if (k == 0) fail(Error::Code::parse_error, path.string() + ": k = 0 marks a general sequence, not read-k");
  try {
    return ReadKSequence::validate(std::move(seq.elems), seq.n, k);
  } catch (const Error& e) {
    if (e.code() == Error::Code::wrong_multiplicity || e.code() == Error::Code::length_mismatch)
      fail(e.code(), path.string() + ": " + e.what() + " (ids reported 0-based)");
    throw;
  }
}

void write_sequence_file(const std::filesystem::path& path, const ReadKSequence& s) {
  if (!s.dense()) fail(Error::Code::invalid_params, "only dense sequences have a file form");
  std::ofstream out(path);
  if (!out) fail(Error::Code::io_error, "cannot write " + path.string());
  out << s.support_size() << " " << s.k() << "\n";
  for (size_t i = 0; i < s.length(); ++i) out << (i ? " " : "") << s.elems()[i] + 1;
  out << "\n";
}

LabelSequence read_label_sequence_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Error::Code::io_error, "cannot open " + path.string());
  auto [seq, k] = parse_sequence_stream(in, path.filename().string());
  if (k != 0 && seq.elems.size() != (size_t)k * seq.n)
    fail(Error::Code::parse_error, path.string() + ": read-k header but " + std::to_string(seq.elems.size()) +
                                       " elements, expected " + std::to_string((size_t)k * seq.n));
  return std::move(seq);
}

void write_label_sequence_file(const std::filesystem::path& path, const LabelSequence& s) {
  std::ofstream out(path);
  if (!out) fail(Error::Code::io_error, "cannot write " + path.string());
  out << s.n << " 0\n";
  for (size_t i = 0; i < s.elems.size(); ++i) out << (i ? " " : "") << s.elems[i] + 1;
  out << "\n";
}

}  // namespace obp
