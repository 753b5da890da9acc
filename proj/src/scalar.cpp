#include "pgibbs/scalar.hpp"

#include <cctype>
#include <string>

#include "pgibbs/errors.hpp"

namespace pgibbs {

namespace {

using boost::multiprecision::mpz_int;

[[noreturn]] void bad_number(std::string_view text) {
  throw InvalidInput("not a number: '" + std::string(text) + "'");
}

mpz_int parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) bad_number(whole);
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) bad_number(whole);
  }
  // mpz treats a leading 0 as an octal prefix.
  const auto first = digits.find_first_not_of('0');
  return first == std::string_view::npos ? mpz_int(0) : mpz_int(std::string(digits.substr(first)));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) bad_number(text);

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_rational(s.substr(0, slash));
    const Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    const mpz_int magnitude = parse_integer(exp_text, text);
    if (magnitude > 4000) bad_number(text);
    exponent = magnitude.convert_to<long>() * (exp_negative ? -1 : 1);
    s = s.substr(0, e);
  }
  std::string digits;
  long fraction_digits = 0;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view int_part = s.substr(0, dot);
    const std::string_view frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) bad_number(text);
    digits = std::string(int_part) + std::string(frac_part);
    fraction_digits = static_cast<long>(frac_part.size());
  } else {
    digits = std::string(s);
  }
  Rational value(parse_integer(digits, text));
  exponent -= fraction_digits;
  mpz_int scale = 1;
  for (long i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) scale *= 10;
  if (exponent < 0) {
    value /= Rational(scale);
  } else {
    value *= Rational(scale);
  }
  return negative ? Rational(-value) : value;
}

template <>
double parse_scalar<double>(std::string_view text) {
  return parse_rational(text).convert_to<double>();
}

template <>
Rational parse_scalar<Rational>(std::string_view text) {
  return parse_rational(text);
}

}  // namespace pgibbs
