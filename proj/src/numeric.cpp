#include "coupling/numeric.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "coupling/errors.hpp"

namespace coupling {

NumericPolicy& numeric_policy() {
  static NumericPolicy policy;
  return policy;
}

NumericPolicy parse_numeric_policy(std::string_view text) {
  NumericPolicy policy;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t stop = text.find(',', pos);
    if (stop == std::string_view::npos) stop = text.size();
    std::string_view item = text.substr(pos, stop - pos);
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos)
      raise(errc::precondition_failed,
            "numeric policy entries must look like key=value");
    std::string key(item.substr(0, eq));
    double value = std::strtod(std::string(item.substr(eq + 1)).c_str(), nullptr);
    if (!(value > 0))
      raise(errc::precondition_failed, "numeric policy tolerance must be > 0");
    if (key == "stochastic")
      policy.stochastic_tol = value;
    else if (key == "residual")
      policy.residual_tol = value;
    else
      raise(errc::precondition_failed, "unknown numeric policy key: " + key);
    pos = stop + 1;
  }
  return policy;
}

namespace {

bool is_integer_token(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rat parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty())
    raise(errc::precondition_failed, "empty scalar");

  std::size_t slash = text.find('/');
  if (slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den))
      raise(errc::precondition_failed,
            "bad rational literal: " + std::string(text));
    Int d{std::string(den)};
    if (d == 0)
      raise(errc::precondition_failed, "zero denominator: " + std::string(text));
    return Rat(Int(std::string(num)), d);
  }

  std::size_t dot = text.find('.');
  if (dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+'))
      whole.remove_prefix(1);
    if ((whole.empty() && frac.empty()) ||
        (!whole.empty() && !is_integer_token(whole)) ||
        (!frac.empty() && !is_integer_token(frac)))
      raise(errc::precondition_failed,
            "bad decimal literal: " + std::string(text));
    Int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Int units = whole.empty() ? Int(0) : Int(std::string(whole));
    Int digits = frac.empty() ? Int(0) : Int(std::string(frac));
    Rat value = Rat(units * scale + digits, scale);
    return negative ? -value : value;
  }

  if (!is_integer_token(text))
    raise(errc::precondition_failed, "bad scalar literal: " + std::string(text));
  return Rat(Int(std::string(text)));
}

std::string format_rational(const Rat& value) {
  Int num = numerator(value), den = denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rat rational_from_double(double value) {
  if (!std::isfinite(value))
    raise(errc::precondition_failed, "non-finite scalar");
  return Rat(value);  // exact: boost decomposes the mantissa
}

double to_double(const Rat& value) {
  return value.convert_to<double>();
}

const char* errc_name(errc code) {
  switch (code) {
    case errc::negative_entry: return "NegativeEntry";
    case errc::row_sum_not_one: return "RowSumNotOne";
    case errc::not_irreducible: return "NotIrreducible";
    case errc::not_doubly_stochastic: return "NotDoublyStochastic";
    case errc::support_too_large: return "SupportTooLarge";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::bad_length: return "BadLength";
    case errc::out_of_range_symbol: return "OutOfRangeSymbol";
    case errc::state_budget_exceeded: return "StateBudgetExceeded";
    case errc::cap_exceeded: return "CapExceeded";
    case errc::float_mode_rejected: return "FloatModeRejected";
    case errc::not_a_divisor: return "NotADivisor";
    case errc::precondition_failed: return "PreconditionFailed";
  }
  return "UnknownError";
}

}  // namespace coupling
