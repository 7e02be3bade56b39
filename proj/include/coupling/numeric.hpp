#ifndef COUPLING_NUMERIC_HPP
#define COUPLING_NUMERIC_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace coupling {

// Exact rational scalar used by every decision procedure.  Floating point
// is reserved for Monte Carlo paths.
using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

// Tolerances for float-mode inputs.  Equality tests on rational-mode data
// are always exact and ignore these.
struct NumericPolicy {
  double stochastic_tol = 1e-12;  // row/column sums of float matrices
  double residual_tol = 1e-10;    // linear-solve residuals in float mode
};

// Process-wide policy.  The CLI overrides it from COALESCE_NUMERIC_POLICY,
// e.g. "stochastic=1e-9,residual=1e-8".
NumericPolicy& numeric_policy();
NumericPolicy parse_numeric_policy(std::string_view text);

// Parses "p/q", "p", or a plain decimal such as "0.25" (read exactly).
Rat parse_rational(std::string_view text);

// "p/q", or just "p" when the denominator is 1.
std::string format_rational(const Rat& value);

// Every finite double is a dyadic rational; this conversion is exact.
Rat rational_from_double(double value);

double to_double(const Rat& value);

inline Int rat_floor(const Rat& value) {
  Int num = numerator(value), den = denominator(value);
  Int q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

}  // namespace coupling

#endif
