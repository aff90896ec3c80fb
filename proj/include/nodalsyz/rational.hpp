#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace nodalsyz {

// Arbitrary-precision rational; GMP keeps it canonical (lowest terms,
// positive denominator) after every arithmetic operation.
using Rational = mpq_class;

// Parses "p", "-p" or "p/q" (decimal digits only).  Throws
// std::invalid_argument naming the offending text on malformed input or a
// zero denominator.
Rational parse_rational(std::string_view text);

// Canonical text form: "p" when the denominator is 1, otherwise "p/q".
std::string to_string(const Rational& value);

// value^exponent for any integer exponent; a zero base with a negative
// exponent throws std::domain_error.
Rational power(const Rational& base, long exponent);

}  // namespace nodalsyz
