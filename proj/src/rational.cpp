#include "volent/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace volent {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  BigInt p(std::string{num});
  BigInt q(std::string{den});
  if (q == 0) {
    throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  }
  Rational r(p, q);
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& value) {
  const BigInt& q = boost::multiprecision::denominator(value);
  const BigInt& p = boost::multiprecision::numerator(value);
  if (q == 1) return p.str();
  return p.str() + "/" + q.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Rational from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite length");
  int exponent = 0;
  double mantissa = std::frexp(value, &exponent);
  // mantissa * 2^53 is an exact integer.
  auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r{BigInt(scaled)};
  if (exponent > 0) {
    r *= Rational(BigInt(1) << exponent);
  } else if (exponent < 0) {
    r /= Rational(BigInt(1) << -exponent);
  }
  return r;
}

double log_of(const BigInt& value) {
  if (value <= 0) throw std::domain_error("log of non-positive integer");
  const unsigned bits = boost::multiprecision::msb(value) + 1;
  if (bits <= 60) return std::log(value.convert_to<double>());
  const unsigned shift = bits - 60;
  BigInt top = value >> shift;
  return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}

}  // namespace volent
