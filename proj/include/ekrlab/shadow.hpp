#pragma once

#include <vector>

#include "ekrlab/family.hpp"
#include "ekrlab/rational.hpp"
#include "ekrlab/verdict.hpp"

namespace ekrlab {

/// s-fold lower shadow: (k-s)-sets contained in some member. Needs s <= k.
UniformFamily lower_shadow(const UniformFamily& a, unsigned s = 1);

/// Increasing-family shadow {A : A ∪ C ∈ F for some s-set C}, C allowed to
/// overlap A. Throws for non-increasing F. Empty when s > n.
SetFamily increasing_shadow(const SetFamily& f, unsigned s);

/// s-fold upper shadow: (k+s)-sets containing some member. Needs k+s <= n.
UniformFamily upper_shadow(const UniformFamily& a, unsigned s = 1);

/// Colex rank of a set (0-based): sum of C(a_i - 1, i) over its sorted
/// elements a_1 < ... < a_k.
BigInt colex_rank(Mask a);
/// Lex rank of a k-subset of [n] (0-based).
BigInt lex_rank(unsigned n, Mask a);

/// Initial segment of [n]^(k) of size m in lexicographic order.
struct LexSegment {
  unsigned n = 0, k = 0;
  std::uint64_t m = 0;
  bool contains(Mask a) const;
  UniformFamily family() const;
};
/// Initial segment of [n]^(k) of size m in colexicographic order.
struct ColexSegment {
  unsigned n = 0, k = 0;
  std::uint64_t m = 0;
  bool contains(Mask a) const;
  UniformFamily family() const;
};
/// Both throw unless 0 <= m <= C(n,k).
LexSegment lex_segment(unsigned n, unsigned k, std::uint64_t m);
ColexSegment colex_segment(unsigned n, unsigned k, std::uint64_t m);

/// Cascade m = C(a_k,k) + C(a_{k-1},k-1) + ... + C(a_j,j), a_k > ... > a_j >= j >= 1.
/// Returned as (a_i, i) pairs, top term first.
std::vector<std::pair<unsigned long, unsigned>> cascade(const BigInt& m, unsigned k);

/// Minimum of |∂^s A| over all A ⊂ N^(k) with |A| = m.
BigInt kk_min_shadow(const BigInt& m, unsigned k, unsigned s = 1);
/// Minimum of |∂^{+s} A| over A ⊂ [n]^(k), |A| = m, via complements:
/// equals kk_min_shadow(m, n-k, s). Attained by lex segments.
BigInt kk_min_upper_shadow(unsigned n, const BigInt& m, unsigned k, unsigned s = 1);

/// |∂^t F| >= |F| for a t-intersecting F ⊂ [n]^(k). Throws unless F is
/// t-intersecting.
VerdictReport katona_check(const UniformFamily& f, unsigned t);
/// mu_p(∂^t F) >= ((1-p)/p)^t mu_p(F) for increasing t-intersecting F.
/// Throws unless F is increasing and t-intersecting, or p outside (0,1).
VerdictReport katona_check(const SetFamily& f, unsigned t, const Rational& p);

/// F_{N,k} = {A ∈ [N]^(k) : A ∩ [n] ∈ F}. Needs n < N <= 64, k <= N.
UniformFamily lift(const SetFamily& f, unsigned big_n, unsigned k);
/// |F_{N,k}| = sum over S in F of C(N-n, k-|S|); no size limit on N.
BigInt lift_count(const SetFamily& f, unsigned long big_n, unsigned long k);

struct LiftRow {
  unsigned long big_n;
  unsigned long k;  // floor(p N)
  BigInt count;
  Rational ratio;   // count / C(N,k)
};
std::vector<LiftRow> lift_ratio_table(const SetFamily& f, const Rational& p, std::span<const unsigned long> sizes);

/// Hilton: cross-intersecting A ⊂ [n]^(k), B ⊂ [n]^(l) have
/// cross-intersecting lex replacements L(A), L(B). With r given and
/// n >= k+l, |A| >= C(n,k) - C(n-r,k) also forces |B| <= C(n-r,l-r).
/// Throws when A, B are not cross-intersecting.
VerdictReport hilton_check(const UniformFamily& a, const UniformFamily& b, std::optional<unsigned> r = std::nullopt);

/// For t-intersecting F with |F^(k) ∩ S_B| >= C(n-t,k-t) - C(n-t-r,k-t) and
/// n >= k+l-2t+1: |F^(l) \ S_B| <= (2^t - 1) C(n-t-r, l-t-r+1).
VerdictReport union_bound_check(const SetFamily& f, unsigned t, Mask b, unsigned k, unsigned l, unsigned r);

}  // namespace ekrlab
