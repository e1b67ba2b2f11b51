// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treemi/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace treemi {

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  normalize();
}

void Polynomial::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Polynomial Polynomial::constant(const Rational& c) {
  return Polynomial(std::vector<Rational>{c});
}

Polynomial Polynomial::monomial(int degree, const Rational& c) {
  std::vector<Rational> v(degree + 1, Rational(0));
  v[degree] = c;
  return Polynomial(std::move(v));
}

Rational Polynomial::eval(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Rational> v(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
  for (size_t i = 0; i < coeffs_.size(); ++i) v[i] += coeffs_[i];
  for (size_t i = 0; i < o.coeffs_.size(); ++i) v[i] += o.coeffs_[i];
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const {
  std::vector<Rational> v = coeffs_;
  for (auto& c : v) c = -c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return Polynomial();
  std::vector<Rational> v(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < o.coeffs_.size(); ++j) v[i + j] += coeffs_[i] * o.coeffs_[j];
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator*(const Rational& c) const {
  std::vector<Rational> v = coeffs_;
  for (auto& x : v) x *= c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::antiderivative() const {
  if (is_zero()) return Polynomial();
  std::vector<Rational> v(coeffs_.size() + 1, Rational(0));
  for (size_t i = 0; i < coeffs_.size(); ++i) v[i + 1] = coeffs_[i] / Rational(static_cast<long>(i) + 1);
  return Polynomial(std::move(v));
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<Rational> v(coeffs_.size() - 1, Rational(0));
  for (size_t i = 1; i < coeffs_.size(); ++i) v[i - 1] = coeffs_[i] * Rational(static_cast<long>(i));
  return Polynomial(std::move(v));
}

Polynomial compose_affine(const Polynomial& p, const AffineExpr& a) {
  // Horner: p(s*y + t) built from the top coefficient down.
  Polynomial result;
  Polynomial arg({a.intercept, a.slope});
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it)
    result = result * arg + Polynomial::constant(*it);
  return result;
}

PiecewisePoly PiecewisePoly::from_pieces(std::vector<Piece> pieces) {
  std::vector<Piece> kept;
  kept.reserve(pieces.size());
  for (auto& p : pieces) {
    if (p.poly.is_zero()) continue;
    if (!(p.lower < p.upper)) {
      if (p.lower == p.upper) continue;  // empty piece
      throw std::logic_error("piece with lower > upper");
    }
    kept.push_back(std::move(p));
  }
  std::sort(kept.begin(), kept.end(),
            [](const Piece& a, const Piece& b) { return a.lower < b.lower; });
  for (size_t i = 1; i < kept.size(); ++i)
    if (kept[i].lower < kept[i - 1].upper)
      throw std::logic_error("overlapping piecewise polynomial pieces");
  // Merge adjacent pieces with identical polynomials.
  std::vector<Piece> merged;
  for (auto& p : kept) {
    if (!merged.empty() && merged.back().upper == p.lower && merged.back().poly == p.poly)
      merged.back().upper = p.upper;
    else
      merged.push_back(std::move(p));
  }
  PiecewisePoly out;
  out.pieces_ = std::move(merged);
  return out;
}

PiecewisePoly PiecewisePoly::constant(const Rational& lo, const Rational& hi,
                                      const Rational& value) {
  if (!(lo < hi) || value == 0) return PiecewisePoly();
  return from_pieces({Piece{lo, hi, Polynomial::constant(value)}});
}

const Piece* PiecewisePoly::piece_at(const Rational& x) const {
  for (const auto& p : pieces_) {
    if (p.lower <= x && x <= p.upper) return &p;
    if (p.lower > x) break;
  }
  return nullptr;
}

Rational PiecewisePoly::eval(const Rational& x) const {
  const Piece* p = piece_at(x);
  return p ? p->poly.eval(x) : Rational(0);
}

PiecewisePoly PiecewisePoly::clip(const Rational& lo, const Rational& hi) const {
  std::vector<Piece> out;
  for (const auto& p : pieces_) {
    Rational l = std::max(p.lower, lo);
    Rational u = std::min(p.upper, hi);
    if (l < u) out.push_back(Piece{l, u, p.poly});
  }
  return from_pieces(std::move(out));
}

PiecewisePoly PiecewisePoly::scale(const Rational& c) const {
  if (c == 0) return PiecewisePoly();
  std::vector<Piece> out;
  for (const auto& p : pieces_) out.push_back(Piece{p.lower, p.upper, p.poly * c});
  return from_pieces(std::move(out));
}

PiecewisePoly PiecewisePoly::times_monomial(int k) const {
  Polynomial xk = Polynomial::monomial(k);
  std::vector<Piece> out;
  for (const auto& p : pieces_) out.push_back(Piece{p.lower, p.upper, p.poly * xk});
  return from_pieces(std::move(out));
}

Rational PiecewisePoly::integrate(const Rational& l, const Rational& u) const {
  if (!(l <= u)) throw std::logic_error("integrate with l > u");
  Rational acc(0);
  for (const auto& p : pieces_) {
    Rational a = std::max(p.lower, l);
    Rational b = std::min(p.upper, u);
    if (a < b) {
      Polynomial F = p.poly.antiderivative();
      acc += F.eval(b) - F.eval(a);
    }
  }
  return acc;
}

Rational PiecewisePoly::integrate_all() const {
  Rational acc(0);
  for (const auto& p : pieces_) {
    Polynomial F = p.poly.antiderivative();
    acc += F.eval(p.upper) - F.eval(p.lower);
  }
  return acc;
}

std::vector<Rational> PiecewisePoly::breakpoints() const {
  std::vector<Rational> v;
  for (const auto& p : pieces_) {
    v.push_back(p.lower);
    v.push_back(p.upper);
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

int PiecewisePoly::max_degree() const {
  int d = -1;
  for (const auto& p : pieces_) d = std::max(d, p.poly.degree());
  return d;
}

bool PiecewisePoly::operator==(const PiecewisePoly& o) const {
  if (pieces_.size() != o.pieces_.size()) return false;
  for (size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].lower != o.pieces_[i].lower) return false;
    if (pieces_[i].upper != o.pieces_[i].upper) return false;
    if (!(pieces_[i].poly == o.pieces_[i].poly)) return false;
  }
  return true;
}

PiecewisePoly pw_multiply(const PiecewisePoly& a, const PiecewisePoly& b) {
  std::vector<Piece> out;
  for (const auto& pa : a.pieces()) {
    for (const auto& pb : b.pieces()) {
      Rational l = std::max(pa.lower, pb.lower);
      Rational u = std::min(pa.upper, pb.upper);
      if (l < u) out.push_back(Piece{l, u, pa.poly * pb.poly});
    }
  }
  return PiecewisePoly::from_pieces(std::move(out));
}

Polynomial pw_integrate_symbolic(const Polynomial& p, const AffineExpr& lower,
                                 const AffineExpr& upper) {
  Polynomial F = p.antiderivative();
  return compose_affine(F, upper) - compose_affine(F, lower);
}

}  // namespace treemi
