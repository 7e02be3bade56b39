#ifndef COUPLING_ERRORS_HPP
#define COUPLING_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace coupling {

// Domain error codes surfaced by the library; the CLI prints the name on
// stderr and exits with code 1.
enum class errc {
  negative_entry,
  row_sum_not_one,
  not_irreducible,
  not_doubly_stochastic,
  support_too_large,
  dimension_mismatch,
  bad_length,
  out_of_range_symbol,
  state_budget_exceeded,
  cap_exceeded,
  float_mode_rejected,
  not_a_divisor,
  precondition_failed,
};

const char* errc_name(errc code);

class domain_error : public std::runtime_error {
 public:
  domain_error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  errc code() const { return code_; }
  const char* name() const { return errc_name(code_); }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
  throw domain_error(code, message);
}

}  // namespace coupling

#endif
