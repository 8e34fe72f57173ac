#pragma once

// Scalar tower shared by every module: exact rationals (GMP) and IEEE doubles.
// Algorithms are templated on the scalar; NumericMode selects one at run time.

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sigmoment {

using Rational = mpq_class;

enum class NumericMode { Exact, Float };

inline const char* to_string(NumericMode mode) {
  return mode == NumericMode::Exact ? "exact" : "float";
}

NumericMode parse_mode(std::string_view text);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got);
};

template <typename T>
using Point = std::vector<T>;

template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
  static Rational abs(const Rational& v) { return ::abs(v); }
  static double to_double(const Rational& v) { return v.get_d(); }
  // Doubles are dyadic rationals, so this conversion is exact.
  static Rational from_double(double v) { return Rational(v); }
  static Rational from_int(long v) { return Rational(v); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static bool is_zero(double v) { return v == 0.0; }
  static double abs(double v) { return std::fabs(v); }
  static double to_double(double v) { return v; }
  static double from_double(double v) { return v; }
  static double from_int(long v) { return static_cast<double>(v); }
};

template <typename To, typename From>
To scalar_cast(const From& v) {
  if constexpr (std::is_same_v<To, From>) {
    return v;
  } else if constexpr (std::is_same_v<To, double>) {
    return ScalarTraits<From>::to_double(v);
  } else {
    return ScalarTraits<To>::from_double(ScalarTraits<From>::to_double(v));
  }
}

template <typename To, typename From>
Point<To> point_cast(const Point<From>& p) {
  Point<To> out;
  out.reserve(p.size());
  for (const auto& v : p) out.push_back(scalar_cast<To>(v));
  return out;
}

// Integer power by repeated squaring; works for both scalars.
template <typename T>
T ipow(const T& base, unsigned exponent) {
  T result = ScalarTraits<T>::one();
  T b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent != 0) b *= b;
  }
  return result;
}

// "p/q", "p", or a decimal literal such as "0.25" or "-1e-3" (converted exactly).
Rational parse_rational(std::string_view text);
// Canonical "num/den" form, den > 0, reduced.
std::string format_rational(const Rational& v);

// Binomial coefficient C(n, k) as a size; throws on overflow.
std::size_t binomial(std::size_t n, std::size_t k);

}  // namespace sigmoment
