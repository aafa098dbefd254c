#pragma once

#include <span>
#include <string>
#include <vector>

#include "ekrlab/rational.hpp"
#include "ekrlab/real.hpp"

namespace ekrlab {

/// Polynomial in p with exact rational coefficients, lowest degree first.
/// Trailing zero coefficients are dropped, so the zero polynomial has no
/// coefficients and degree -1.
class MeasurePolynomial {
 public:
  MeasurePolynomial() = default;
  explicit MeasurePolynomial(std::vector<Rational> coefficients);

  /// sum_j counts[j] p^j (1-p)^(n-j): the measure of a family with
  /// counts[j] members of size j.
  static MeasurePolynomial from_weight_profile(std::span<const std::uint64_t> counts, unsigned n);

  const std::vector<Rational>& coefficients() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Rational coefficient(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }

  Rational operator()(const Rational& p) const;
  Real operator()(const Real& p) const;
  MeasurePolynomial derivative() const;

  MeasurePolynomial& operator+=(const MeasurePolynomial& o);
  friend MeasurePolynomial operator+(MeasurePolynomial a, const MeasurePolynomial& b) { return a += b; }
  friend MeasurePolynomial operator-(const MeasurePolynomial& a, const MeasurePolynomial& b);
  friend bool operator==(const MeasurePolynomial& a, const MeasurePolynomial& b) { return a.c_ == b.c_; }

  /// "3p^2 - 2p^3"; "0" for the zero polynomial.
  std::string str() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

}  // namespace ekrlab
