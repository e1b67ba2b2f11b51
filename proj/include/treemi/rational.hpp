// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace treemi {

// Exact rational arithmetic for every value on the solver path. Stored in
// lowest terms with a positive denominator; no floating point is ever used
// except in Monte-Carlo estimation and reporting.
using Rational = mpq_class;
using BigInt = mpz_class;

// Builds p/q in canonical form. q must be nonzero.
Rational rat(long p, long q = 1);

// Parses "p" or "p/q" (q > 0 after canonicalization). Throws
// std::invalid_argument on malformed input or zero denominator.
Rational rational_from_string(std::string_view text);

// Renders "p" or "p/q"; inverse of rational_from_string.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

// Decimal rendering with the given number of significant digits; used only
// for human-facing annotation next to the exact value.
std::string to_decimal_string(const Rational& r, int significant_digits);

inline Rational midpoint(const Rational& a, const Rational& b) {
  Rational m = (a + b) / 2;
  return m;
}

}  // namespace treemi
