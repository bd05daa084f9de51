// Exact rationals backed by GMP.
#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace arboreal {

using Rational = mpq_class;

/// Parses "a/b" or an integer "a" into a canonical rational. Decimal strings
/// are rejected; throws std::invalid_argument on malformed input or b = 0.
Rational parse_rational(std::string_view text);

/// Canonical reduced form: "a/b", or "a" when the denominator is 1.
std::string to_string(const Rational& value);

/// base^exponent for exponent >= 0.
Rational pow(const Rational& base, unsigned long exponent);

/// Checks 0 <= p < 1; throws std::domain_error otherwise.
void require_probability_below_one(const Rational& p);

}  // namespace arboreal
