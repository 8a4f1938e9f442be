#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace eqlearn {

/// Exact arbitrary-precision rational. Every probability mass and edge
/// weight in the library is carried in this type; comparisons against
/// boundary values such as 1/2 are exact.
using Rational = mpq_class;

/// Parses "p/q" or an integer "n". Whitespace and signs other than a
/// leading '-' are rejected. Throws std::invalid_argument on malformed
/// input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Like parse_rational, but also accepts finite decimals ("0.25").
Rational parse_decimal(std::string_view text);

/// Canonical "p/q" form, or "n" when the denominator is 1.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// 2^exponent as an exact rational (negative exponents allowed).
Rational pow2(int exponent);

/// Converts a 64-bit unsigned integer without going through `unsigned long`
/// assumptions.
mpz_class to_mpz(std::uint64_t value);

} // namespace eqlearn
