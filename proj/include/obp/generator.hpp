#pragma once

#include <cstdint>
#include <string>

#include "obp/bits.hpp"
#include "obp/errors.hpp"

namespace obp {

// A deterministic seed-to-output expansion.
class BitGenerator {
public:
  virtual ~BitGenerator() = default;
  virtual int64_t seed_length() const = 0;
  virtual int64_t output_length() const = 0;
  virtual Bits expand(const Bits& seed) const = 0;
  virtual std::string id() const = 0;
};

class UniformGenerator final : public BitGenerator {
public:
  explicit UniformGenerator(int64_t n) : n_(n) {
    if (n < 0) fail(Error::Code::invalid_params, "negative output length");
  }
  int64_t seed_length() const override { return n_; }
  int64_t output_length() const override { return n_; }
  Bits expand(const Bits& seed) const override {
    if ((int64_t)seed.size() != n_) fail(Error::Code::seed_length_mismatch, "uniform generator seed length");
    return seed;
  }
  std::string id() const override { return "uniform[n=" + std::to_string(n_) + "]"; }

private:
  int64_t n_;
};

}  // namespace obp
