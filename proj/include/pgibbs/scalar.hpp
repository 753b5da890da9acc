#pragma once

#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace pgibbs {

// Exact arithmetic backend for verification runs.
using Rational = boost::multiprecision::mpq_rational;

enum class NumericMode { Float64, ExactRational };

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double from_double(double x) { return x; }
  static double to_double(double x) { return x; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  // Exact binary value of x.
  static Rational from_double(double x) { return Rational(x); }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
};

template <class S>
double to_double(const S& x) {
  return ScalarTraits<S>::to_double(x);
}

// Parses "3", "-0.25", "1.5e-3" or "2/3" exactly. Throws InvalidInput.
Rational parse_rational(std::string_view text);

template <class S>
S parse_scalar(std::string_view text);

}  // namespace pgibbs
