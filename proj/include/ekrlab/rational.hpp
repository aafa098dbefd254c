#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace ekrlab {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Parses "num/den" or a bare integer. Throws std::invalid_argument on
/// anything else (decimals are rejected on purpose).
Rational parse_rational(std::string_view text);

/// Parses "num/den", an integer, or a plain decimal / scientific literal
/// such as "1e-12" into the exact rational it denotes. Used for tolerances.
Rational parse_decimal(std::string_view text);

/// Always "num/den", lowest terms, positive denominator.
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

/// C(n, k); zero when k < 0, k > n or n < 0.
BigInt binom(long n, long k);

Rational pow(const Rational& base, unsigned exponent);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace ekrlab
