#pragma once

#include <stdexcept>
#include <string>

namespace obp {

// Invalid inputs and violated preconditions throw. Checker rejections
// (non-monotone reads, failed interleaving, ...) are ordinary return values,
// not errors.
class Error : public std::runtime_error {
public:
  enum class Code {
    wrong_multiplicity,
    length_mismatch,
    read_index_out_of_range,
    not_per_read_monotone,
    segment_assignment,
    tape_mismatch,
    input_length_mismatch,
    not_power_of_two,
    invalid_params,
    seed_length_mismatch,
    too_large_for_exhaustive,
    incompatible_dimensions,
    certificate_violation,
    parse_error,
    io_error,
  };

  Error(Code c, std::string msg) : std::runtime_error(std::move(msg)), code_(c) {}
  Code code() const { return code_; }

private:
  Code code_;
};

[[noreturn]] inline void fail(Error::Code c, const std::string& msg) { throw Error(c, msg); }

}  // namespace obp
