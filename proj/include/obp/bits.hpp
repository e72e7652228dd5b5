#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

#include "obp/rng.hpp"

namespace obp {

// Fixed-length bit string, bit 0 first, packed LSB-first into 64-bit words.
// Unused bits of the top word are kept zero so equality is word-wise.
class Bits {
public:
  Bits() = default;
  explicit Bits(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  static Bits from_u64(uint64_t v, size_t n) {
    assert(n <= 64);
    Bits b(n);
    if (n > 0) b.w_[0] = (n == 64) ? v : (v & ((uint64_t{1} << n) - 1));
    return b;
  }

  static Bits random(size_t n, Rng& rng) {
    Bits b(n);
    for (auto& w : b.w_) w = rng.u64();
    b.mask_top();
    return b;
  }

  size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool get(size_t i) const {
    assert(i < n_);
    return (w_[i >> 6] >> (i & 63)) & 1;
  }
  void set(size_t i, bool v) {
    assert(i < n_);
    uint64_t m = uint64_t{1} << (i & 63);
    if (v)
      w_[i >> 6] |= m;
    else
      w_[i >> 6] &= ~m;
  }
  void flip(size_t i) {
    assert(i < n_);
    w_[i >> 6] ^= uint64_t{1} << (i & 63);
  }

  uint64_t to_u64() const {
    assert(n_ <= 64);
    return n_ ? w_[0] : 0;
  }

  // Bits [off, off+len), as a new value.
  Bits slice(size_t off, size_t len) const {
    assert(off + len <= n_);
    Bits r(len);
    size_t wo = off >> 6, sh = off & 63;
    for (size_t i = 0; i < r.w_.size(); ++i) {
      uint64_t lo = w_[wo + i] >> sh;
      uint64_t hi = (sh != 0 && wo + i + 1 < w_.size()) ? (w_[wo + i + 1] << (64 - sh)) : 0;
      r.w_[i] = lo | hi;
    }
    r.mask_top();
    return r;
  }

  // Zero-extend (or truncate) to width n.
  Bits resized(size_t n) const {
    Bits r(n);
    size_t nw = std::min(r.w_.size(), w_.size());
    for (size_t i = 0; i < nw; ++i) r.w_[i] = w_[i];
    r.mask_top();
    return r;
  }

  bool operator==(const Bits& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const Bits& o) const { return !(*this == o); }

  std::string to_string() const {
    std::string s(n_, '0');
    for (size_t i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  static Bits parse(const std::string& s) {
    Bits b(s.size());
    for (size_t i = 0; i < s.size(); ++i) b.set(i, s[i] == '1');
    return b;
  }

  const std::vector<uint64_t>& words() const { return w_; }
  std::vector<uint64_t>& words() { return w_; }
  void mask_top() {
    if ((n_ & 63) != 0 && !w_.empty()) w_.back() &= (uint64_t{1} << (n_ & 63)) - 1;
  }

private:
  size_t n_ = 0;
  std::vector<uint64_t> w_;
};

// popcount(a AND b) mod 2; both operands must have equal length.
inline bool parity_and(const Bits& a, const Bits& b) {
  assert(a.size() == b.size());
  uint64_t acc = 0;
  for (size_t i = 0; i < a.words().size(); ++i) acc ^= a.words()[i] & b.words()[i];
  return std::popcount(acc) & 1;
}

}  // namespace obp
