#pragma once

#include <mpfr.h>

#include <functional>
#include <string>

#include "ekrlab/rational.hpp"

namespace ekrlab {

/// Working precision in bits. Defaults to 128 (relative error well below
/// 1e-18); EKRLAB_PRECISION=<bits> overrides it for the whole process.
mpfr_prec_t default_precision();

/// Multiprecision real with an explicit precision carried by each value.
/// Binary operations round to the larger precision of their operands.
class Real {
 public:
  explicit Real(mpfr_prec_t bits = default_precision());
  Real(const Rational& q, mpfr_prec_t bits);
  Real(long v, mpfr_prec_t bits);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Decimal scientific form with `digits` significant digits.
  std::string str(int digits = 18) const;

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real operator-(const Real& a);
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

 private:
  mpfr_t v_;
};

Real log(const Real& x);
Real exp(const Real& x);
Real pow(const Real& base, const Real& exponent);
Real abs(const Real& x);
/// log_base(x) = ln x / ln base.
Real log_base(const Real& x, const Real& base);

/// Comparison tolerance and retry policy for inequalities whose sides are
/// not both rational.
struct Tolerance {
  Rational tau{1, 1000000000000};  // 1e-12
  mpfr_prec_t bits = default_precision();
  int max_doublings = 2;
};

/// Result of one two-sided check. lhs/rhs are strings so exact values stay
/// exact in reports.
struct Comparison {
  std::string lhs;
  std::string rhs;
  std::string slack;  // lhs - rhs for ">=", rhs - lhs for "<="
  bool holds = false;
  bool equality = false;  // |slack| <= tau (exact zero for rational checks)
  bool near_boundary = false;
  mpfr_prec_t bits = 0;  // 0 when evaluated exactly
};

using RealFn = std::function<Real(mpfr_prec_t)>;

enum class Relation { ge, le, gt, lt, eq };
const char* relation_symbol(Relation r);

Comparison compare_exact(const Rational& lhs, Relation rel, const Rational& rhs);

/// Evaluates lhs `rel` rhs (ge or le) with tolerance tau. If the slack lands
/// within 10*tau of zero the precision is doubled and both sides are
/// recomputed, at most tol.max_doublings times.
Comparison compare_real(const RealFn& lhs, Relation rel, const RealFn& rhs, const Tolerance& tol,
                        const std::string& lhs_exact = {});

}  // namespace ekrlab
