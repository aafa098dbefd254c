#include "ekrlab/real.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace ekrlab {

mpfr_prec_t default_precision() {
  static const mpfr_prec_t bits = [] {
    const char* env = std::getenv("EKRLAB_PRECISION");
    if (env == nullptr || *env == '\0') return mpfr_prec_t{128};
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 64 || v > 65536)
      throw std::invalid_argument("EKRLAB_PRECISION must be an integer bit count in [64, 65536]");
    return static_cast<mpfr_prec_t>(v);
  }();
  return bits;
}

Real::Real(mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_zero(v_, 1);
}

Real::Real(const Rational& q, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
}

Real::Real(long v, mpfr_prec_t bits) {
  mpfr_init2(v_, bits);
  mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(v_, other.precision());
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(v_, other.precision());
  mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

std::string Real::str(int digits) const {
  if (is_nan()) return "nan";
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", digits - 1, v_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

namespace {

mpfr_prec_t joint(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

}  // namespace

Real operator+(const Real& a, const Real& b) {
  Real r(joint(a, b));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r(joint(a, b));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  Real r(joint(a, b));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  Real r(joint(a, b));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator-(const Real& a) {
  Real r(a.precision());
  mpfr_neg(r.v_, a.v_, MPFR_RNDN);
  return r;
}

Real log(const Real& x) {
  Real r(x.precision());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real exp(const Real& x) {
  Real r(x.precision());
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& base, const Real& exponent) {
  Real r(std::max(base.precision(), exponent.precision()));
  mpfr_pow(r.get(), base.get(), exponent.get(), MPFR_RNDN);
  return r;
}

Real abs(const Real& x) {
  Real r(x.precision());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real log_base(const Real& x, const Real& base) { return log(x) / log(base); }

const char* relation_symbol(Relation r) {
  switch (r) {
    case Relation::ge: return ">=";
    case Relation::le: return "<=";
    case Relation::gt: return ">";
    case Relation::lt: return "<";
    case Relation::eq: return "==";
  }
  return "?";
}

Comparison compare_exact(const Rational& lhs, Relation rel, const Rational& rhs) {
  Comparison c;
  c.lhs = to_string(lhs);
  c.rhs = to_string(rhs);
  Rational slack = (rel == Relation::le || rel == Relation::lt) ? Rational(rhs - lhs) : Rational(lhs - rhs);
  c.slack = to_string(slack);
  int s = sgn(slack);
  c.equality = s == 0;
  switch (rel) {
    case Relation::ge:
    case Relation::le: c.holds = s >= 0; break;
    case Relation::gt:
    case Relation::lt: c.holds = s > 0; break;
    case Relation::eq: c.holds = s == 0; break;
  }
  return c;
}

Comparison compare_real(const RealFn& lhs, Relation rel, const RealFn& rhs, const Tolerance& tol,
                        const std::string& lhs_exact) {
  if (rel != Relation::ge && rel != Relation::le && rel != Relation::eq)
    throw std::invalid_argument("compare_real supports >=, <= and == only");
  mpfr_prec_t bits = tol.bits;
  for (int round = 0;; ++round) {
    Real l = lhs(bits);
    Real r = rhs(bits);
    Real slack = rel == Relation::le ? r - l : l - r;
    Real tau(tol.tau, bits);
    Real mag = abs(slack);
    Real ten_tau = tau * Real(10, bits);
    bool near = mag < ten_tau || slack.is_nan();
    if (near && round < tol.max_doublings) {
      bits *= 2;
      continue;
    }
    Comparison c;
    c.lhs = lhs_exact.empty() ? l.str() : lhs_exact;
    c.rhs = r.str();
    c.slack = slack.str();
    c.bits = bits;
    c.near_boundary = near;
    c.equality = mag <= tau;
    if (rel == Relation::eq)
      c.holds = c.equality;
    else
      c.holds = slack >= -tau;
    return c;
  }
}

}  // namespace ekrlab
