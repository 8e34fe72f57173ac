#include "sigmoment/scalar.hpp"

#include <cctype>
#include <limits>
#include <string>

namespace sigmoment {

NumericMode parse_mode(std::string_view text) {
  if (text == "exact") return NumericMode::Exact;
  if (text == "float") return NumericMode::Float;
  throw Error("unknown numeric mode '" + std::string(text) + "' (expected exact|float)");
}

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t got)
    : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
            std::to_string(got)) {}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Rational power_of_ten(long exponent) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent < 0 ? Rational(mpz_class(1), p) : Rational(p);
  r.canonicalize();
  return r;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6)
      throw Error("malformed number '" + std::string(text) + "'");
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if ((!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part)) || (int_part.empty() && frac_part.empty()))
      throw Error("malformed number '" + std::string(text) + "'");
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(s)) throw Error("malformed number '" + std::string(text) + "'");
    digits = std::string(s);
  }
  Rational value(mpz_class(digits, 10));
  value *= power_of_ten(exponent);
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    std::string_view num_digits = num;
    if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+'))
      num_digits.remove_prefix(1);
    if (!all_digits(num_digits) || !all_digits(den))
      throw Error("malformed rational '" + std::string(text) + "'");
    mpz_class d(std::string(den), 10);
    if (d == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    std::string n(num);
    if (!n.empty() && n.front() == '+') n.erase(0, 1);
    Rational r(mpz_class(n, 10), d);
    r.canonicalize();
    return r;
  }
  return parse_decimal(text);
}

std::string format_rational(const Rational& v) {
  Rational c = v;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t numerator = n - k + i;
    if (result > std::numeric_limits<std::size_t>::max() / numerator)
      throw Error("binomial coefficient overflow");
    result = result * numerator / i;
  }
  return result;
}

}  // namespace sigmoment
