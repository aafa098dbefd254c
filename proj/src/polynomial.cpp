#include "ekrlab/polynomial.hpp"

#include <algorithm>

namespace ekrlab {

MeasurePolynomial::MeasurePolynomial(std::vector<Rational> coefficients) : c_(std::move(coefficients)) { trim(); }

void MeasurePolynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

MeasurePolynomial MeasurePolynomial::from_weight_profile(std::span<const std::uint64_t> counts, unsigned n) {
  // p^j (1-p)^(n-j) = sum_i C(n-j, i) (-1)^i p^(j+i)
  std::vector<BigInt> acc(n + 1);
  for (unsigned j = 0; j < counts.size() && j <= n; ++j) {
    if (counts[j] == 0) continue;
    BigInt cnt;
    mpz_set_ui(cnt.get_mpz_t(), counts[j]);
    for (unsigned i = 0; i + j <= n; ++i) {
      BigInt term = cnt * binom(n - j, i);
      if (i & 1u)
        acc[j + i] -= term;
      else
        acc[j + i] += term;
    }
  }
  std::vector<Rational> c;
  c.reserve(acc.size());
  for (auto& a : acc) c.emplace_back(a);
  return MeasurePolynomial(std::move(c));
}

Rational MeasurePolynomial::operator()(const Rational& p) const {
  Rational r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * p + *it;
  return r;
}

Real MeasurePolynomial::operator()(const Real& p) const {
  Real r(p.precision());
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * p + Real(*it, p.precision());
  return r;
}

MeasurePolynomial MeasurePolynomial::derivative() const {
  std::vector<Rational> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long>(i));
  return MeasurePolynomial(std::move(d));
}

MeasurePolynomial& MeasurePolynomial::operator+=(const MeasurePolynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

MeasurePolynomial operator-(const MeasurePolynomial& a, const MeasurePolynomial& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coefficient(i) - b.coefficient(i);
  return MeasurePolynomial(std::move(c));
}

std::string MeasurePolynomial::str() const {
  if (c_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    const Rational& c = c_[i];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (s.empty())
      s += sgn(c) < 0 ? "-" : "";
    else
      s += sgn(c) < 0 ? " - " : " + ";
    bool unit = mag == 1 && i > 0;
    if (!unit) s += is_integer(mag) ? mag.get_num().get_str() : "(" + mag.get_str() + ")";
    if (i >= 1) s += "p";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

}  // namespace ekrlab
