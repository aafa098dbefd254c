#include "ekrlab/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace ekrlab {

namespace {

bool is_signed_digits(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

BigInt parse_integer(std::string_view s) {
  std::string tmp(s);
  if (!tmp.empty() && tmp.front() == '+') tmp.erase(0, 1);
  return BigInt(tmp, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_signed_digits(num) || !is_signed_digits(den) || den.front() == '-' || den.front() == '+')
    throw std::invalid_argument("invalid rational '" + std::string(text) + "', expected num/den");
  BigInt d = parse_integer(den);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational q(parse_integer(num), d);
  q.canonicalize();
  return q;
}

Rational parse_decimal(std::string_view text) {
  if (text.find('/') != std::string_view::npos || is_signed_digits(text)) return parse_rational(text);
  std::string_view mant = text;
  long exp10 = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view ex = text.substr(e + 1);
    if (!is_signed_digits(ex)) throw std::invalid_argument("invalid number '" + std::string(text) + "'");
    exp10 = std::stol(std::string(ex));
    mant = text.substr(0, e);
  }
  bool neg = false;
  if (!mant.empty() && (mant.front() == '-' || mant.front() == '+')) {
    neg = mant.front() == '-';
    mant.remove_prefix(1);
  }
  std::string digits;
  bool seen_dot = false;
  for (char c : mant) {
    if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_dot) --exp10;
    } else {
      throw std::invalid_argument("invalid number '" + std::string(text) + "'");
    }
  }
  if (digits.empty()) throw std::invalid_argument("invalid number '" + std::string(text) + "'");
  BigInt m(digits, 10);
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  Rational q = exp10 < 0 ? Rational(m, scale) : Rational(m * scale);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

std::string to_string(const BigInt& z) { return z.get_str(); }

BigInt binom(long n, long k) {
  BigInt r;
  if (n < 0 || k < 0 || k > n) return r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  r.canonicalize();
  return r;
}

}  // namespace ekrlab
