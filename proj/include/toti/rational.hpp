#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace toti {

/// Exact rational number. GMP keeps every value reduced with a positive
/// denominator after each arithmetic operation.
using Rat = mpq_class;
using BigInt = mpz_class;

Rat make_rat(long num, long den = 1);

/// 2^-k for k >= 0.
Rat dyadic(unsigned k);

/// Strict "p/q" (or bare integer "p") parser. Rejects zero or negative
/// denominators and non-reduced fractions.
Rat parse_rat(std::string_view text);

/// Always the reduced "p/q" form, including "/1" for integers.
std::string to_string(const Rat& r);

/// Least k >= 0 with r * 2^k an integer, or -1 if the denominator is not a
/// power of two.
int dyadic_exponent(const Rat& r);

}  // namespace toti
