#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace volent {

/// Exact rational used for every length and volume in the data model.
using Rational = boost::multiprecision::cpp_rational;
/// Arbitrary-precision integer used for exact path counts.
using BigInt = boost::multiprecision::cpp_int;

/// Parses "p/q", "p" or "-p/q". Throws std::invalid_argument on malformed text
/// or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" when the denominator is 1, otherwise "p/q" in
/// lowest terms.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Exact conversion; every finite double is a dyadic rational.
Rational from_double(double value);

/// Natural logarithm of a positive big integer, accurate for values far beyond
/// the range of double.
double log_of(const BigInt& value);

}  // namespace volent
