#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <string>

#include "obp/errors.hpp"

namespace obp {

using u128 = unsigned __int128;
using i128 = __int128;

inline std::string u128_str(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(char('0' + (int)(v % 10)));
    v /= 10;
  }
  return std::string(s.rbegin(), s.rend());
}

inline int u128_bits(u128 v) {
  int b = 0;
  while (v > 0) {
    ++b;
    v >>= 1;
  }
  return b;
}

// Exact non-negative dyadic rational num / 2^e, kept normalized (num odd or
// zero). All counts at desk scale fit well inside 128 bits; the harness caps
// guarantee that.
class Dyadic {
public:
  Dyadic() = default;

  static Dyadic ratio(u128 num, int log2_den) {
    assert(log2_den >= 0 && log2_den < 128);
    Dyadic d;
    d.num_ = num;
    d.e_ = log2_den;
    d.normalize();
    return d;
  }
  static Dyadic zero() { return {}; }
  static Dyadic one() { return ratio(1, 0); }

  u128 numerator() const { return num_; }
  int log2_denominator() const { return e_; }
  bool is_zero() const { return num_ == 0; }

  double to_double() const {
    double hi = (double)(uint64_t)(num_ >> 64);
    double lo = (double)(uint64_t)num_;
    return std::ldexp(hi, 64 - e_) + std::ldexp(lo, -e_);
  }

  std::string to_string() const { return u128_str(num_) + "/2^" + std::to_string(e_); }

  static Dyadic parse(const std::string& s) {
    auto slash = s.find("/2^");
    if (slash == std::string::npos) fail(Error::Code::parse_error, "bad dyadic: " + s);
    u128 num = 0;
    for (size_t i = 0; i < slash; ++i) {
      if (s[i] < '0' || s[i] > '9') fail(Error::Code::parse_error, "bad dyadic: " + s);
      num = num * 10 + (u128)(s[i] - '0');
    }
    int e = std::stoi(s.substr(slash + 3));
    return ratio(num, e);
  }

  friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.num_ == b.num_ && a.e_ == b.e_; }
  friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }

  friend bool operator<(const Dyadic& a, const Dyadic& b) {
    int e = std::max(a.e_, b.e_);
    return a.shifted_to(e) < b.shifted_to(e);
  }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return !(b < a); }

  friend Dyadic abs_diff(const Dyadic& a, const Dyadic& b) {
    int e = std::max(a.e_, b.e_);
    u128 x = a.shifted_to(e), y = b.shifted_to(e);
    return ratio(x > y ? x - y : y - x, e);
  }

private:
  void normalize() {
    if (num_ == 0) {
      e_ = 0;
      return;
    }
    while ((num_ & 1) == 0 && e_ > 0) {
      num_ >>= 1;
      --e_;
    }
  }

  u128 shifted_to(int e) const {
    int sh = e - e_;
    assert(sh >= 0 && u128_bits(num_) + sh <= 127);
    return num_ << sh;
  }

  u128 num_ = 0;
  int e_ = 0;
};

}  // namespace obp
