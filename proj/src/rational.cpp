// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treemi/rational.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace treemi {

Rational rat(long p, long q) {
  if (q == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

Rational rational_from_string(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  std::string s(text);
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    bool ok = (c >= '0' && c <= '9') || c == '/' || (c == '-' && i == 0);
    if (!ok) throw std::invalid_argument("malformed rational literal: " + s);
  }
  Rational r;
  if (r.set_str(s, 10) != 0)
    throw std::invalid_argument("malformed rational literal: " + s);
  if (r.get_den() == 0)
    throw std::invalid_argument("rational with zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

double to_double(const Rational& r) { return r.get_d(); }

std::string to_decimal_string(const Rational& r, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, r.get_d());
  return buf;
}

}  // namespace treemi
