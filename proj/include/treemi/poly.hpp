// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "treemi/rational.hpp"

namespace treemi {

/// Dense univariate polynomial with exact rational coefficients,
/// coefficient index = degree. The zero polynomial has no coefficients;
/// otherwise the leading coefficient is nonzero.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);
  static Polynomial constant(const Rational& c);
  static Polynomial monomial(int degree, const Rational& c = Rational(1));

  bool is_zero() const { return coeffs_.empty(); }
  /// Degree of the polynomial; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  Rational eval(const Rational& x) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  Polynomial operator-() const;
  bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

  /// The antiderivative F with F' = *this and F(0) = 0.
  Polynomial antiderivative() const;
  Polynomial derivative() const;

 private:
  void normalize();
  std::vector<Rational> coeffs_;
};

/// slope * y + intercept, the symbolic integration bounds produced by
/// solving a linear atom for the variable being integrated out.
struct AffineExpr {
  Rational slope;
  Rational intercept;

  AffineExpr() : slope(0), intercept(0) {}
  AffineExpr(Rational s, Rational i) : slope(std::move(s)), intercept(std::move(i)) {}
  static AffineExpr constant(const Rational& c) { return AffineExpr(Rational(0), c); }

  Rational eval(const Rational& y) const { return slope * y + intercept; }
  bool operator==(const AffineExpr& o) const {
    return slope == o.slope && intercept == o.intercept;
  }
};

/// q(y) = p(slope*y + intercept), expanded exactly.
Polynomial compose_affine(const Polynomial& p, const AffineExpr& a);

struct Piece {
  Rational lower;
  Rational upper;
  Polynomial poly;
};

/// Univariate piecewise polynomial: sorted pieces with pairwise disjoint
/// interiors, value 0 outside all pieces. Canonical form drops empty and
/// zero pieces and merges adjacent pieces carrying the same polynomial,
/// so equality on canonical values is meaningful.
class PiecewisePoly {
 public:
  PiecewisePoly() = default;
  /// Canonicalizes: sorts, drops zero/empty pieces, merges equal neighbors.
  /// Throws std::logic_error if piece interiors overlap.
  static PiecewisePoly from_pieces(std::vector<Piece> pieces);
  static PiecewisePoly constant(const Rational& lo, const Rational& hi,
                                const Rational& value);

  bool empty() const { return pieces_.empty(); }
  const std::vector<Piece>& pieces() const { return pieces_; }

  /// Value at x; 0 outside all pieces (piece endpoints count as inside,
  /// which is immaterial under integration).
  Rational eval(const Rational& x) const;
  /// The piece whose closed interval contains x, or nullptr.
  const Piece* piece_at(const Rational& x) const;

  /// Restriction to [lo, hi].
  PiecewisePoly clip(const Rational& lo, const Rational& hi) const;
  PiecewisePoly scale(const Rational& c) const;
  /// Pointwise product with the monomial x^k (used for moments).
  PiecewisePoly times_monomial(int k) const;

  /// Exact integral over [l, u], via per-piece antiderivative differences.
  Rational integrate(const Rational& l, const Rational& u) const;
  /// Integral over the whole support.
  Rational integrate_all() const;

  /// All piece endpoints, sorted and deduplicated.
  std::vector<Rational> breakpoints() const;
  int max_degree() const;

  bool operator==(const PiecewisePoly& o) const;

 private:
  std::vector<Piece> pieces_;  // canonical
};

/// Pointwise product; support is the intersection of the supports.
PiecewisePoly pw_multiply(const PiecewisePoly& a, const PiecewisePoly& b);

/// F(upper(y)) - F(lower(y)) where F is the antiderivative of p: the
/// integral of p over the symbolic interval [lower(y), upper(y)] as a
/// polynomial in the destination variable y.
Polynomial pw_integrate_symbolic(const Polynomial& p, const AffineExpr& lower,
                                 const AffineExpr& upper);

}  // namespace treemi
