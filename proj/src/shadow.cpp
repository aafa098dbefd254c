#include "ekrlab/shadow.hpp"

#include <algorithm>
#include <stdexcept>

#include "ekrlab/measure.hpp"

namespace ekrlab {

namespace {

std::vector<Mask> shadow_step(const std::vector<Mask>& members) {
  std::vector<Mask> out;
  for (Mask a : members)
    for (Mask r = a; r != 0; r &= r - 1) out.push_back(a & ~(r & (~r + 1)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Mask> upper_step(const std::vector<Mask>& members, unsigned n) {
  std::vector<Mask> out;
  const Mask u = prefix_mask(n);
  for (Mask a : members)
    for (Mask r = u & ~a; r != 0; r &= r - 1) out.push_back(a | (r & (~r + 1)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint64_t to_u64(const BigInt& z) {
  if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 64) throw std::overflow_error("value exceeds 64 bits");
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, -1, sizeof v, 0, 0, z.get_mpz_t());
  return v;
}

BigInt from_u64(std::uint64_t v) {
  BigInt z;
  mpz_import(z.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
  return z;
}

// Next mask with the same popcount, numerically (colex successor).
Mask gosper(Mask x) {
  const Mask lo = x & (~x + 1);
  const Mask hi = x + lo;
  return hi | (((x ^ hi) >> 2) / lo);
}

// Reflection j -> n+1-j.
Mask reflect(unsigned n, Mask a) {
  Mask out = 0;
  for (Mask r = a; r != 0; r &= r - 1) {
    unsigned j = static_cast<unsigned>(__builtin_ctzll(r));  // element j+1
    out |= Mask{1} << (n - 1 - j);
  }
  return out;
}

void check_segment(unsigned n, unsigned k, std::uint64_t m) {
  if (n > kMaxUniformN || k > n) throw std::invalid_argument("segment needs k <= n <= 64");
  if (from_u64(m) > binom(n, k)) throw std::invalid_argument("segment size exceeds C(n,k)");
}

}  // namespace

UniformFamily lower_shadow(const UniformFamily& a, unsigned s) {
  if (s > a.k()) throw std::invalid_argument("lower_shadow needs s <= k");
  std::vector<Mask> cur = a.members();
  for (unsigned i = 0; i < s; ++i) cur = shadow_step(cur);
  return UniformFamily::from_members(a.n(), a.k() - s, std::move(cur));
}

UniformFamily upper_shadow(const UniformFamily& a, unsigned s) {
  if (a.k() + s > a.n()) throw std::invalid_argument("upper_shadow needs k + s <= n");
  std::vector<Mask> cur = a.members();
  for (unsigned i = 0; i < s; ++i) cur = upper_step(cur, a.n());
  return UniformFamily::from_members(a.n(), a.k() + s, std::move(cur));
}

SetFamily increasing_shadow(const SetFamily& f, unsigned s) {
  if (!f.is_increasing()) throw std::invalid_argument("increasing_shadow: family is not increasing");
  if (s > f.n()) return SetFamily(f.n());
  // F increasing: A ∪ C ∈ F for an s-set C iff A is at most s additions
  // away from a member, so apply s single-element down steps.
  const auto& k = kernels::active();
  SetFamily cur = f;
  for (unsigned step = 0; step < s; ++step) {
    SetFamily next = cur;
    for (unsigned i = 0; i < f.n(); ++i) {
      SetFamily moved = cur;
      k.down_pass(moved.data(), moved.words().size(), i);
      next |= moved;
    }
    cur = std::move(next);
  }
  return cur;
}

BigInt colex_rank(Mask a) {
  BigInt r = 0;
  unsigned i = 1;
  for (Mask x = a; x != 0; x &= x - 1, ++i) r += binom(__builtin_ctzll(x), i);
  return r;
}

BigInt lex_rank(unsigned n, Mask a) {
  const unsigned k = popcount(a);
  return binom(n, k) - 1 - colex_rank(reflect(n, a));
}

bool LexSegment::contains(Mask a) const {
  if (popcount(a) != k || (a & ~prefix_mask(n))) return false;
  return lex_rank(n, a) < from_u64(m);
}

bool ColexSegment::contains(Mask a) const {
  if (popcount(a) != k || (a & ~prefix_mask(n))) return false;
  return colex_rank(a) < from_u64(m);
}

UniformFamily LexSegment::family() const {
  std::vector<Mask> out;
  out.reserve(m);
  const std::uint64_t total = to_u64(binom(n, k));
  if (m == 0) return UniformFamily(n, k);
  std::vector<unsigned> c(k);
  for (unsigned i = 0; i < k; ++i) c[i] = i;
  for (std::uint64_t idx = 0; idx < m; ++idx) {
    Mask x = 0;
    for (unsigned v : c) x |= Mask{1} << v;
    out.push_back(x);
    if (idx + 1 == m || idx + 1 == total) break;
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && c[i] == n - k + static_cast<unsigned>(i)) --i;
    ++c[i];
    for (unsigned j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return UniformFamily::from_members(n, k, std::move(out));
}

UniformFamily ColexSegment::family() const {
  std::vector<Mask> out;
  out.reserve(m);
  Mask x = prefix_mask(k);
  for (std::uint64_t idx = 0; idx < m; ++idx) {
    out.push_back(x);
    if (idx + 1 < m) x = gosper(x);
  }
  return UniformFamily::from_members(n, k, std::move(out));
}

LexSegment lex_segment(unsigned n, unsigned k, std::uint64_t m) {
  check_segment(n, k, m);
  return {n, k, m};
}

ColexSegment colex_segment(unsigned n, unsigned k, std::uint64_t m) {
  check_segment(n, k, m);
  return {n, k, m};
}

std::vector<std::pair<unsigned long, unsigned>> cascade(const BigInt& m, unsigned k) {
  if (m < 0) throw std::invalid_argument("cascade needs m >= 0");
  std::vector<std::pair<unsigned long, unsigned>> out;
  BigInt rest = m;
  for (unsigned i = k; i >= 1 && rest > 0; --i) {
    // largest a with C(a,i) <= rest
    unsigned long lo = i, hi = i;
    while (binom(static_cast<long>(hi), i) <= rest) hi = hi * 2 + 1;
    while (hi - lo > 1) {
      unsigned long mid = lo + (hi - lo) / 2;
      if (binom(static_cast<long>(mid), i) <= rest)
        lo = mid;
      else
        hi = mid;
    }
    out.emplace_back(lo, i);
    rest -= binom(static_cast<long>(lo), i);
  }
  return out;
}

BigInt kk_min_shadow(const BigInt& m, unsigned k, unsigned s) {
  if (k == 0) throw std::invalid_argument("kk_min_shadow needs k >= 1");
  if (s > k) throw std::invalid_argument("kk_min_shadow needs s <= k");
  BigInt total = 0;
  for (auto [a, i] : cascade(m, k)) total += binom(static_cast<long>(a), static_cast<long>(i) - static_cast<long>(s));
  return total;
}

BigInt kk_min_upper_shadow(unsigned n, const BigInt& m, unsigned k, unsigned s) {
  if (k + s > n) throw std::invalid_argument("kk_min_upper_shadow needs k + s <= n");
  if (m > binom(n, k)) throw std::invalid_argument("m exceeds C(n,k)");
  if (m == 0) return 0;
  if (k == n) return m;  // s = 0
  return kk_min_shadow(m, n - k, s);
}

VerdictReport katona_check(const UniformFamily& f, unsigned t) {
  if (!is_t_intersecting(f, t)) throw std::invalid_argument("katona_check: family is not t-intersecting");
  VerdictReport r;
  r.check = "katona_uniform";
  r.inputs["n"] = f.n();
  r.inputs["k"] = f.k();
  r.inputs["t"] = t;
  r.hypotheses.push_back(Flag::boolean("t-intersecting", true));
  BigInt shadow = f.empty() ? BigInt(0) : BigInt(static_cast<unsigned long>(lower_shadow(f, t).size()));
  BigInt size(static_cast<unsigned long>(f.size()));
  r.conclusion = Flag::compared("|shadow_t(F)| >= |F|", compare_exact(shadow, Relation::ge, size), Relation::ge);
  r.finalize();
  return r;
}

VerdictReport katona_check(const SetFamily& f, unsigned t, const Rational& p) {
  check_probability(p, true);
  if (!f.is_increasing()) throw std::invalid_argument("katona_check: family is not increasing");
  if (!is_t_intersecting(f, t)) throw std::invalid_argument("katona_check: family is not t-intersecting");
  VerdictReport r;
  r.check = "katona_biased";
  r.inputs["n"] = f.n();
  r.inputs["t"] = t;
  r.inputs["p"] = to_string(p);
  r.hypotheses.push_back(Flag::boolean("increasing", true));
  r.hypotheses.push_back(Flag::boolean("t-intersecting", true));
  Rational lhs = mu(increasing_shadow(f, t), p);
  Rational rhs = pow((1 - p) / p, t) * mu(f, p);
  r.conclusion = Flag::compared("mu_p(shadow_t(F)) >= ((1-p)/p)^t mu_p(F)", compare_exact(lhs, Relation::ge, rhs),
                                Relation::ge);
  r.finalize();
  return r;
}

UniformFamily lift(const SetFamily& f, unsigned big_n, unsigned k) {
  const unsigned n = f.n();
  if (big_n <= n || big_n > kMaxUniformN || k > big_n) throw std::invalid_argument("lift needs n < N <= 64 and k <= N");
  const unsigned extra = big_n - n;
  std::vector<Mask> out;
  f.for_each([&](Mask s) {
    unsigned sz = popcount(s);
    if (sz > k || k - sz > extra) return;
    const unsigned need = k - sz;
    if (need == 0) {
      out.push_back(s);
      return;
    }
    const Mask end_bit = extra >= 64 ? 0 : Mask{1} << extra;
    for (Mask x = prefix_mask(need);;) {
      out.push_back(s | (x << n));
      Mask nx = gosper(x);
      if (nx <= x || (end_bit != 0 && nx >= end_bit)) break;
      x = nx;
    }
  });
  return UniformFamily::from_members(big_n, k, std::move(out));
}

BigInt lift_count(const SetFamily& f, unsigned long big_n, unsigned long k) {
  const unsigned n = f.n();
  if (big_n <= n) throw std::invalid_argument("lift_count needs N > n");
  auto prof = f.weight_profile();
  BigInt total = 0;
  for (unsigned j = 0; j <= n; ++j)
    if (prof[j] != 0)
      total += from_u64(prof[j]) * binom(static_cast<long>(big_n - n), static_cast<long>(k) - static_cast<long>(j));
  return total;
}

std::vector<LiftRow> lift_ratio_table(const SetFamily& f, const Rational& p, std::span<const unsigned long> sizes) {
  check_probability(p, true);
  std::vector<LiftRow> rows;
  for (unsigned long big_n : sizes) {
    BigInt kz = p.get_num() * big_n / p.get_den();  // floor, both nonnegative
    unsigned long k = kz.get_ui();
    LiftRow row{big_n, k, lift_count(f, big_n, k), 0};
    row.ratio = Rational(row.count, binom(static_cast<long>(big_n), static_cast<long>(k)));
    row.ratio.canonicalize();
    rows.push_back(std::move(row));
  }
  return rows;
}

VerdictReport hilton_check(const UniformFamily& a, const UniformFamily& b, std::optional<unsigned> r) {
  if (a.n() != b.n()) throw std::invalid_argument("hilton_check: families on different grounds");
  if (!are_cross_intersecting(a.members(), b.members()))
    throw std::invalid_argument("hilton_check: families are not cross-intersecting");
  const unsigned n = a.n(), k = a.k(), l = b.k();
  VerdictReport rep;
  rep.check = "hilton";
  rep.inputs["n"] = n;
  rep.inputs["k"] = k;
  rep.inputs["l"] = l;
  rep.inputs["size_a"] = a.size();
  rep.inputs["size_b"] = b.size();
  rep.hypotheses.push_back(Flag::boolean("cross-intersecting", true));

  UniformFamily la = lex_segment(n, k, a.size()).family();
  UniformFamily lb = lex_segment(n, l, b.size()).family();
  bool lex_ok = are_cross_intersecting(la.members(), lb.members());
  rep.add_value("lex_pair_cross_intersecting", lex_ok ? "true" : "false");

  bool size_ok = true;
  if (r) {
    rep.inputs["r"] = *r;
    const BigInt threshold = binom(n, k) - binom(static_cast<long>(n) - *r, k);
    const bool applies = n >= k + l && BigInt(static_cast<unsigned long>(a.size())) >= threshold;
    rep.add_value("size_bound_applies", applies ? "true" : "false");
    if (applies) {
      BigInt cap = binom(static_cast<long>(n) - *r, static_cast<long>(l) - *r);
      size_ok = BigInt(static_cast<unsigned long>(b.size())) <= cap;
      rep.add_value("size_bound", "|B| = " + std::to_string(b.size()) + " <= " + cap.get_str());
    }
  }
  rep.conclusion = Flag::boolean("lex replacements cross-intersecting and size bound", lex_ok && size_ok);
  rep.finalize();
  return rep;
}

VerdictReport union_bound_check(const SetFamily& f, unsigned t, Mask b, unsigned k, unsigned l, unsigned r) {
  const unsigned n = f.n();
  VerdictReport rep;
  rep.check = "union_bound";
  rep.inputs["n"] = n;
  rep.inputs["t"] = t;
  rep.inputs["B"] = set_string(b);
  rep.inputs["k"] = k;
  rep.inputs["l"] = l;
  rep.inputs["r"] = r;
  rep.hypotheses.push_back(Flag::boolean("t-intersecting", is_t_intersecting(f, t)));
  rep.hypotheses.push_back(Flag::boolean("|B| = t", popcount(b) == t && (b & ~f.universe()) == 0));
  rep.hypotheses.push_back(Flag::boolean("n >= k + l - 2t + 1", static_cast<long>(n) >= static_cast<long>(k + l) - 2L * t + 1));
  std::uint64_t inside = 0, outside = 0;
  f.for_each([&](Mask x) {
    if (popcount(x) == k && (x & b) == b) ++inside;
    if (popcount(x) == l && (x & b) != b) ++outside;
  });
  const long nt = static_cast<long>(n) - t;
  BigInt need = binom(nt, static_cast<long>(k) - t) - binom(nt - r, static_cast<long>(k) - t);
  rep.hypotheses.push_back(Flag::compared("|F^(k) ∩ S_B| >= C(n-t,k-t) - C(n-t-r,k-t)",
                                          compare_exact(from_u64(inside), Relation::ge, need), Relation::ge));
  BigInt cap = (BigInt(1) << t) - 1;
  cap *= binom(nt - r, static_cast<long>(l) - t - r + 1);
  rep.conclusion = Flag::compared("|F^(l) \\ S_B| <= (2^t-1) C(n-t-r, l-t-r+1)",
                                  compare_exact(from_u64(outside), Relation::le, cap), Relation::le);
  rep.finalize();
  return rep;
}

}  // namespace ekrlab
