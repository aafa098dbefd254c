#include "ekrlab/stability.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "ekrlab/family_io.hpp"
#include "ekrlab/measure.hpp"
#include "ekrlab/search.hpp"

namespace ekrlab {

namespace {

// A quantity that stays rational while it can and otherwise is evaluated
// on demand at the precision the comparison asks for.
struct Value {
  std::optional<Rational> exact;
  RealFn fn;

  Real at(mpfr_prec_t bits) const { return fn(bits); }
  std::string str() const { return exact ? to_string(*exact) : fn(default_precision()).str(); }
};

Value num(const Rational& r) {
  return {r, [r](mpfr_prec_t b) { return Real(r, b); }};
}
Value lazy(RealFn f) { return {std::nullopt, std::move(f)}; }

Value operator+(const Value& a, const Value& b) {
  if (a.exact && b.exact) return num(*a.exact + *b.exact);
  return lazy([a, b](mpfr_prec_t bits) { return a.at(bits) + b.at(bits); });
}
Value operator-(const Value& a, const Value& b) {
  if (a.exact && b.exact) return num(*a.exact - *b.exact);
  return lazy([a, b](mpfr_prec_t bits) { return a.at(bits) - b.at(bits); });
}
Value operator*(const Value& a, const Value& b) {
  if (a.exact && b.exact) return num(*a.exact * *b.exact);
  return lazy([a, b](mpfr_prec_t bits) { return a.at(bits) * b.at(bits); });
}
Value operator/(const Value& a, const Value& b) {
  if (a.exact && b.exact) return num(*a.exact / *b.exact);
  return lazy([a, b](mpfr_prec_t bits) { return a.at(bits) / b.at(bits); });
}
Value ipow(const Value& a, unsigned e) {
  if (a.exact) return num(pow(*a.exact, e));
  return lazy([a, e](mpfr_prec_t bits) { return pow(a.at(bits), Real(static_cast<long>(e), bits)); });
}

// m >= 0 with base^m == x, for base in (0,1).
std::optional<unsigned> exact_exponent(const Rational& x, const Rational& base) {
  if (x <= 0 || x > 1 || base <= 0 || base >= 1) return std::nullopt;
  Rational cur = 1;
  for (unsigned m = 0; m <= 4096; ++m) {
    if (cur == x) return m;
    if (cur < x) return std::nullopt;
    cur *= base;
  }
  return std::nullopt;
}

// x^(log_base(target)) with base, target in (0,1). Exact when x is an
// integer power of base: base^m maps to target^m.
Value power_log(const Value& x, const Value& base, const Value& target) {
  if (x.exact && *x.exact == 0) return num(0);
  if (x.exact && base.exact && target.exact)
    if (auto m = exact_exponent(*x.exact, *base.exact)) return num(pow(*target.exact, *m));
  return lazy([x, base, target](mpfr_prec_t bits) { return pow(x.at(bits), log_base(target.at(bits), base.at(bits))); });
}

Comparison compare(const Value& lhs, Relation rel, const Value& rhs, const Tolerance& tol) {
  if (lhs.exact && rhs.exact) return compare_exact(*lhs.exact, rel, *rhs.exact);
  const bool strict = rel == Relation::gt || rel == Relation::lt;
  const Relation base = rel == Relation::gt ? Relation::ge : rel == Relation::lt ? Relation::le : rel;
  Comparison c = compare_real(lhs.fn, base, rhs.fn, tol, lhs.exact ? to_string(*lhs.exact) : std::string{});
  if (strict) c.holds = c.holds && !c.equality;
  return c;
}

Flag check(std::string name, const Value& lhs, Relation rel, const Value& rhs, const Tolerance& tol) {
  return Flag::compared(std::move(name), compare(lhs, rel, rhs, tol), rel);
}

Value one() { return num(1); }

// scale * eps^exponent of the bootstrapping step, written as
// ((1-p0)/p0 * eps^(log_p p0))^(log_{1-p0}(1-p)).
Value bootstrap_term(const Value& eps, const Value& p, const Value& p0) {
  Value inner = (one() - p0) / p0 * power_log(eps, p, p0);
  return power_log(inner, one() - p0, one() - p);
}

// (eps / divisor)^(log_p(1-p)).
Value intersecting_term(const Value& eps, const Value& p, const Rational& divisor) {
  return power_log(eps / num(divisor), p, one() - p);
}

// mu at a possibly irrational p, from the size profile.
Value mu_at(const std::vector<std::uint64_t>& profile, unsigned n, const Value& p) {
  if (p.exact) return num(mu_from_profile(profile, n, *p.exact));
  return lazy([profile, n, p](mpfr_prec_t bits) {
    Real q = p.at(bits), r = Real(1L, bits) - q, sum(0L, bits);
    for (unsigned j = 0; j <= n; ++j) {
      if (profile[j] == 0) continue;
      Real term = pow(q, Real(static_cast<long>(j), bits)) * pow(r, Real(static_cast<long>(n - j), bits));
      sum = sum + Real(static_cast<long>(profile[j]), bits) * term;
    }
    return sum;
  });
}

std::vector<Mask> subsets_lex(unsigned n, unsigned t) {
  if (t < 1 || t > n) throw std::invalid_argument("subset size must satisfy 1 <= t <= n");
  std::vector<Mask> out;
  const Mask last = prefix_mask(n) & ~prefix_mask(n - t);
  for (Mask x = prefix_mask(t);;) {
    out.push_back(x);
    if (x == last) break;
    const Mask lo = x & (~x + 1);
    const Mask hi = x + lo;
    x = hi | (((x ^ hi) >> 2) / lo);
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

// Minimum over candidate masks of the measure (or count) of members failing
// keep(member, candidate); first minimum in candidate order wins.
template <class Keep>
NearestUmvirate nearest_by(const std::vector<Mask>& members, unsigned n, const std::vector<Mask>& candidates,
                           const std::optional<Rational>& p, Keep keep) {
  NearestUmvirate best;
  bool have = false;
  std::vector<std::uint64_t> counts(n + 1);
  for (Mask b : candidates) {
    std::fill(counts.begin(), counts.end(), 0);
    std::uint64_t total = 0;
    for (Mask x : members)
      if (!keep(x, b)) {
        ++counts[popcount(x)];
        ++total;
      }
    Rational r = p ? mu_from_profile(counts, n, *p) : Rational(static_cast<unsigned long>(total));
    if (!have || r < best.residual) {
      best.b = b;
      best.residual = r;
      have = true;
    }
  }
  return best;
}

bool contains_all(Mask x, Mask b) { return (x & b) == b; }
bool meets(Mask x, Mask b) { return (x & b) != 0; }

}  // namespace

NearestUmvirate nearest_umvirate(const SetFamily& f, unsigned t, const Rational& p) {
  check_probability(p, false);
  return nearest_by(f.members(), f.n(), subsets_lex(f.n(), t), p, contains_all);
}

NearestUmvirate nearest_or(const SetFamily& f, unsigned s, const Rational& p) {
  check_probability(p, false);
  return nearest_by(f.members(), f.n(), subsets_lex(f.n(), s), p, meets);
}

NearestUmvirate nearest_umvirate(const UniformFamily& f, unsigned t) {
  return nearest_by(f.members(), f.n(), subsets_lex(f.n(), t), std::nullopt, contains_all);
}

NearestUmvirate nearest_or(const UniformFamily& f, unsigned s) {
  return nearest_by(f.members(), f.n(), subsets_lex(f.n(), s), std::nullopt, meets);
}

NearestUmvirate nearest_triangle(const GraphFamily& f, const Rational& p) {
  check_probability(p, false);
  if (f.ground.triangles().empty()) throw std::invalid_argument("nearest_triangle: needs at least 3 vertices");
  return nearest_by(f.family.members(), f.family.n(), f.ground.triangles(), p, contains_all);
}

NearestUmvirate nearest_triangle(const GraphFamily& f) {
  if (f.ground.triangles().empty()) throw std::invalid_argument("nearest_triangle: needs at least 3 vertices");
  return nearest_by(f.family.members(), f.family.n(), f.ground.triangles(), std::nullopt, contains_all);
}

DerivedConstants derived_constants(const Rational& p0, const Rational& p, unsigned t, mpfr_prec_t bits) {
  check_probability(p0, true);
  check_probability(p, true);
  if (t < 1) throw std::invalid_argument("derived_constants: t >= 1");
  Real P0(p0, bits), P(p, bits), One(1L, bits);
  Real L = log_base(One - P, One - P0);
  DerivedConstants d{pow((One - P0) / P0, L), log_base(P0, P) * L, log_base(One - P, P), Real(bits)};
  Real mersenne(Rational((BigInt(1) << t) - 1), bits);
  d.c_prime = pow(mersenne, -d.v);
  return d;
}

// ---------------------------------------------------------------- theorems

namespace {

struct TheoremInfo {
  TheoremId id;
  const char* name;
};
const TheoremInfo kTheorems[] = {
    {TheoremId::main_biased, "MainBiased"},
    {TheoremId::biased1, "Biased1"},
    {TheoremId::t_intersecting_biased, "TIntersectingBiased"},
    {TheoremId::dual_biased, "DualBiased"},
    {TheoremId::matching_biased, "MatchingBiased"},
    {TheoremId::wilson_uniform, "WilsonUniform"},
    {TheoremId::triangle_biased, "TriangleBiased"},
    {TheoremId::triangle_uniform, "TriangleUniform"},
    {TheoremId::matching_uniform, "MatchingUniform"},
    {TheoremId::frankl_gi, "FranklG_i"},
};

Rational json_rational(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw std::invalid_argument("expected a rational as string or integer");
}

std::optional<Rational> opt_rational(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return json_rational(j.at(key));
}

Rational mersenne(unsigned t) { return Rational((BigInt(1) << t) - 1); }

Rational bin(long n, long k) { return Rational(binom(n, k)); }

// min{a, b} <= mu, where either term may need an unknown constant.
Flag condition0(const Rational& mu, const std::optional<Rational>& a, const std::optional<Rational>& b,
                const std::string& formula) {
  std::vector<Comparison> known;
  for (const auto& term : {a, b})
    if (term) known.push_back(compare_exact(mu, Relation::ge, *term));
  for (const auto& c : known)
    if (c.holds) {
      Flag f = Flag::compared("condition0", c, Relation::ge);
      f.note = formula;
      return f;
    }
  if (a && b) {
    Flag f = Flag::compared("condition0", known.front(), Relation::ge);
    f.note = formula + "; both terms exceed mu";
    return f;
  }
  std::string note = "constant unknown: supply ";
  note += !a && !b ? "C and c" : !a ? "C" : "c";
  if (!known.empty()) note += "; the known term exceeds mu";
  return Flag::unknown("condition0", to_string(mu), ">=", formula, note);
}

void require_eps(const Rational& eps) {
  if (eps < 0) throw std::invalid_argument("eps must be >= 0");
}

const SetFamily& dense_of(const TheoremFamily& f, const char* name) {
  if (auto* s = std::get_if<SetFamily>(&f)) return *s;
  throw std::invalid_argument(std::string(name) + ": needs a family on P([n])");
}
const UniformFamily& uniform_of(const TheoremFamily& f, const char* name) {
  if (auto* s = std::get_if<UniformFamily>(&f)) return *s;
  throw std::invalid_argument(std::string(name) + ": needs a k-uniform family");
}
const GraphFamily& graph_of(const TheoremFamily& f, const char* name) {
  if (auto* s = std::get_if<GraphFamily>(&f)) return *s;
  throw std::invalid_argument(std::string(name) + ": needs a graph family");
}

void require_t(unsigned t, unsigned n, const char* name) {
  if (t < 1 || t > n) throw std::invalid_argument(std::string(name) + ": needs 1 <= t <= n");
}

// Sets the conclusion unless a hypothesis already failed.
void conclude(VerdictReport& r, Flag conclusion) {
  if (!r.any_failed()) r.conclusion = std::move(conclusion);
  r.finalize();
}

void umvirate_witness(VerdictReport& r, const NearestUmvirate& near, const char* kind) {
  r.witness = near.b;
  r.witness_kind = kind;
  r.add_value("residual", to_string(near.residual));
}

// Shared body of the umvirate-type biased theorems.
void biased_umvirate_core(VerdictReport& r, const Rational& mu, const NearestUmvirate& near, unsigned t,
                          const Rational& p, const Rational& eps, const Value& term, const Tolerance& tol) {
  const Value P = num(p);
  const Rational scale = (1 - p) * pow(p, t - 1);
  Value rhs = ipow(P, t) * (one() - term) + num(scale * eps);
  r.add_value("mu", to_string(mu));
  r.add_value("decay_term", term.str());
  r.hypotheses.push_back(check("condition", num(mu), Relation::ge, rhs, tol));
  umvirate_witness(r, near, "umvirate");
  r.add_value("bound", to_string(scale * eps));
  conclude(r, check("residual <= (1-p) p^(t-1) eps", num(near.residual), Relation::le, num(scale * eps), tol));
}

void biased_dual_core(VerdictReport& r, const Rational& mu, const NearestUmvirate& near, unsigned s,
                      const Rational& p, const Rational& eps, const Value& term, const Tolerance& tol) {
  const Value P = num(p), Q = num(1 - p);
  Value rhs = one() - ipow(Q, s - 1) + ipow(Q, s - 1) * (P * (one() - term) + Q * num(eps));
  r.add_value("mu", to_string(mu));
  r.add_value("decay_term", term.str());
  r.hypotheses.push_back(check("condition", num(mu), Relation::ge, rhs, tol));
  umvirate_witness(r, near, "or");
  const Rational bound = pow(1 - p, s) * eps;
  r.add_value("bound", to_string(bound));
  conclude(r, check("residual <= (1-p)^s eps", num(near.residual), Relation::le, num(bound), tol));
}

VerdictReport start(const TheoremCase& tc) {
  VerdictReport r;
  r.check = theorem_name(tc.id);
  r.inputs = to_json(tc);
  return r;
}

VerdictReport main_like(const TheoremCase& tc, const SetFamily& f, const Rational& p0, unsigned t,
                        const Tolerance& tol) {
  const char* name = theorem_name(tc.id);
  require_t(t, f.n(), name);
  check_probability(p0, true);
  VerdictReport r = start(tc);
  r.inputs["n"] = f.n();
  r.hypotheses.push_back(Flag::boolean("increasing", f.is_increasing()));
  r.hypotheses.push_back(Flag::compared("p < p0", compare_exact(tc.p, Relation::lt, p0), Relation::lt));
  r.hypotheses.push_back(Flag::compared("mu_p0(F) <= p0^t", compare_exact(mu(f, p0), Relation::le, pow(p0, t)),
                                        Relation::le));
  const Rational m = mu(f, tc.p);
  std::optional<Rational> a, b;
  if (tc.C) a = *tc.C * pow(tc.p, t + 1);
  if (tc.c) b = pow(tc.p, t) * (1 - *tc.c * (p0 - tc.p));
  r.hypotheses.push_back(condition0(m, a, b, "min{C p^(t+1), p^t (1 - c (p0 - p))}"));
  Value term = bootstrap_term(num(tc.eps), num(tc.p), num(p0));
  biased_umvirate_core(r, m, nearest_umvirate(f, t, tc.p), t, tc.p, tc.eps, term, tol);
  return r;
}

VerdictReport t_intersecting_biased(const TheoremCase& tc, const SetFamily& f, const Tolerance& tol) {
  const unsigned t = tc.t;
  require_t(t, f.n(), "TIntersectingBiased");
  VerdictReport r = start(tc);
  r.inputs["n"] = f.n();
  r.hypotheses.push_back(Flag::boolean("t-intersecting", is_t_intersecting(f, t)));
  const Rational cap(1, t + 1);
  r.hypotheses.push_back(Flag::compared("p < 1/(t+1)", compare_exact(tc.p, Relation::lt, cap), Relation::lt));
  const Rational m = mu(f, tc.p);
  std::optional<Rational> a, b;
  if (tc.C) a = *tc.C * pow(tc.p, t + 1);
  if (tc.c) b = pow(tc.p, t) * (1 - *tc.c * (cap - tc.p));
  r.hypotheses.push_back(condition0(m, a, b, "min{C p^(t+1), p^t (1 - c (1/(t+1) - p))}"));
  const Rational divisor = tc.t_replaced ? Rational(t) : mersenne(t);
  if (tc.t_replaced) r.notes.push_back("t replaces 2^t - 1 in the condition (conjectured form)");
  Value term = intersecting_term(num(tc.eps), num(tc.p), divisor);
  biased_umvirate_core(r, m, nearest_umvirate(f, t, tc.p), t, tc.p, tc.eps, term, tol);
  return r;
}

VerdictReport dual_like(const TheoremCase& tc, const SetFamily& f, const Rational& p0, bool matching,
                        const Tolerance& tol) {
  const unsigned s = tc.t;
  require_t(s, f.n(), theorem_name(tc.id));
  check_probability(p0, true);
  VerdictReport r = start(tc);
  r.inputs["n"] = f.n();
  if (matching) {
    r.hypotheses.push_back(
        Flag::compared("m(F) <= s", compare_exact(Rational(matching_number(f)), Relation::le, Rational(s)), Relation::le));
    r.hypotheses.push_back(Flag::compared("p < 1/(2s+1)", compare_exact(tc.p, Relation::lt, p0), Relation::lt));
  } else {
    r.hypotheses.push_back(Flag::boolean("increasing", f.is_increasing()));
    r.hypotheses.push_back(Flag::compared("p < p0", compare_exact(tc.p, Relation::lt, p0), Relation::lt));
    r.hypotheses.push_back(Flag::compared("mu_p0(F) <= 1 - (1-p0)^s",
                                          compare_exact(mu(f, p0), Relation::le, 1 - pow(1 - p0, s)), Relation::le));
  }
  const Rational m = mu(f, tc.p);
  std::optional<Rational> a, b;
  if (tc.C) a = Rational(s - 1) * tc.p + *tc.C * tc.p * tc.p;
  if (tc.c) b = (1 - *tc.c * (p0 - tc.p)) * (1 - pow(1 - tc.p, s));
  r.hypotheses.push_back(condition0(m, a, b, "min{(s-1) p + C p^2, (1 - c (p0 - p)) (1 - (1-p)^s)}"));
  if (matching) r.add_value("p0", to_string(p0));
  Value term = bootstrap_term(num(tc.eps), num(tc.p), num(p0));
  biased_dual_core(r, m, nearest_or(f, s, tc.p), s, tc.p, tc.eps, term, tol);
  return r;
}

VerdictReport triangle_biased(const TheoremCase& tc, const GraphFamily& g, const Tolerance& tol) {
  VerdictReport r = start(tc);
  r.inputs["vertices"] = g.ground.vertices();
  r.hypotheses.push_back(Flag::boolean("triangle-intersecting", is_triangle_intersecting(g)));
  const Rational half(1, 2);
  r.hypotheses.push_back(Flag::compared("p < 1/2", compare_exact(tc.p, Relation::lt, half), Relation::lt));
  const Rational m = mu(g.family, tc.p);
  std::optional<Rational> a, b;
  if (tc.C) a = *tc.C * pow(tc.p, 4);
  if (tc.c) b = pow(tc.p, 3) * (1 - *tc.c * (half - tc.p));
  r.hypotheses.push_back(condition0(m, a, b, "min{C p^4, p^3 (1 - c (1/2 - p))}"));
  Value term = bootstrap_term(num(tc.eps), num(tc.p), num(half));
  auto near = nearest_triangle(g, tc.p);
  biased_umvirate_core(r, m, near, 3, tc.p, tc.eps, term, tol);
  r.witness_kind = "triangle";
  r.witness_text = g.ground.edge_string(near.b);
  return r;
}

VerdictReport wilson_uniform(const TheoremCase& tc, const UniformFamily& a, const Tolerance& tol) {
  const long n = a.n(), k = a.k(), t = tc.t, d = tc.d;
  require_t(tc.t, a.n(), "WilsonUniform");
  if (d < 1) throw std::invalid_argument("WilsonUniform: d >= 1");
  VerdictReport r = start(tc);
  r.inputs["n"] = n;
  r.inputs["k"] = k;
  const Rational size(static_cast<unsigned long>(a.size()));
  r.hypotheses.push_back(Flag::boolean("t-intersecting", is_t_intersecting(a, tc.t)));
  r.hypotheses.push_back(
      Flag::compared("k/n < 1/(t+1)", compare_exact(Rational(k, n), Relation::lt, Rational(1, t + 1)), Relation::lt));
  const Rational star = bin(n - t, k - t);
  if (tc.delta0) {
    r.hypotheses.push_back(
        Flag::compared("|A| > C(n-t,k-t)(1-delta0)", compare_exact(size, Relation::gt, star * (1 - *tc.delta0)), Relation::gt));
  } else {
    r.hypotheses.push_back(Flag::unknown("|A| > C(n-t,k-t)(1-delta0)", to_string(size), ">",
                                         to_string(star) + " (1 - delta0)", "constant unknown: supply delta0"));
  }
  const Rational bound = mersenne(tc.t) * bin(n - t - d, k - t - d + 1);
  r.hypotheses.push_back(Flag::compared("|A| > C(n-t,k-t) - C(n-t-d,k-t) + (2^t-1) C(n-t-d,k-t-d+1)",
                                        compare_exact(size, Relation::gt, star - bin(n - t - d, k - t) + bound),
                                        Relation::gt));
  (void)tol;
  auto near = nearest_umvirate(a, tc.t);
  umvirate_witness(r, near, "umvirate");
  r.add_value("size", to_string(size));
  r.add_value("bound", to_string(bound));
  conclude(r, Flag::compared("|A \\ S_B| <= (2^t-1) C(n-t-d,k-t-d+1)", compare_exact(near.residual, Relation::le, bound),
                             Relation::le));
  return r;
}

VerdictReport triangle_uniform(const TheoremCase& tc, const GraphFamily& g, const Tolerance& tol) {
  (void)tol;
  const auto members = g.family.members();
  if (members.empty()) throw std::invalid_argument("TriangleUniform: needs a nonempty family of k-edge graphs");
  const long k = popcount(members.front());
  for (Mask x : members)
    if (static_cast<long>(popcount(x)) != k) throw std::invalid_argument("TriangleUniform: graphs must all have k edges");
  const long N = g.ground.n(), d = tc.d;
  if (d < 1) throw std::invalid_argument("TriangleUniform: d >= 1");
  VerdictReport r = start(tc);
  r.inputs["vertices"] = g.ground.vertices();
  r.inputs["k"] = k;
  const Rational size(static_cast<unsigned long>(members.size()));
  r.hypotheses.push_back(Flag::boolean("triangle-intersecting", is_triangle_intersecting(g)));
  r.hypotheses.push_back(Flag::compared("k < C(n,2)/2", compare_exact(Rational(k), Relation::lt, Rational(N, 2)), Relation::lt));
  if (tc.n0) {
    r.hypotheses.push_back(Flag::compared("n >= n0", compare_exact(Rational(g.ground.vertices()), Relation::ge, Rational(*tc.n0)),
                                          Relation::ge));
  } else {
    r.hypotheses.push_back(Flag::unknown("n >= n0", std::to_string(g.ground.vertices()), ">=", "n0",
                                         "constant unknown: supply n0"));
  }
  const Rational star = bin(N - 3, k - 3);
  if (tc.delta0) {
    r.hypotheses.push_back(
        Flag::compared("|A| > C(N-3,k-3)(1-delta0)", compare_exact(size, Relation::gt, star * (1 - *tc.delta0)), Relation::gt));
  } else {
    r.hypotheses.push_back(Flag::unknown("|A| > C(N-3,k-3)(1-delta0)", to_string(size), ">",
                                         to_string(star) + " (1 - delta0)", "constant unknown: supply delta0"));
  }
  const Rational bound = 7 * bin(N - d - 3, k - d - 2);
  r.hypotheses.push_back(Flag::compared("|A| > C(N-3,k-3) - C(N-d-3,k-3) + 7 C(N-d-3,k-d-2)",
                                        compare_exact(size, Relation::gt, star - bin(N - d - 3, k - 3) + bound),
                                        Relation::gt));
  auto near = nearest_triangle(g);
  umvirate_witness(r, near, "triangle");
  r.witness_text = g.ground.edge_string(near.b);
  r.add_value("size", to_string(size));
  r.add_value("bound", to_string(bound));
  conclude(r, Flag::compared("|A \\ S_T| <= 7 C(N-d-3,k-d-2)", compare_exact(near.residual, Relation::le, bound),
                             Relation::le));
  return r;
}

VerdictReport matching_uniform(const TheoremCase& tc, const UniformFamily& a, const Tolerance& tol) {
  const long n = a.n(), k = a.k(), s = tc.t;
  require_t(tc.t, a.n(), "MatchingUniform");
  require_eps(tc.eps);
  VerdictReport r = start(tc);
  r.inputs["n"] = n;
  r.inputs["k"] = k;
  const Rational size(static_cast<unsigned long>(a.size()));
  r.hypotheses.push_back(Flag::compared("m(A) <= s", compare_exact(Rational(matching_number(a)), Relation::le, Rational(s)),
                                        Relation::le));
  r.hypotheses.push_back(
      Flag::compared("k/n < 1/(2s+1)", compare_exact(Rational(k, n), Relation::lt, Rational(1, 2 * s + 1)), Relation::lt));
  const Rational base = bin(n, k) - bin(n - s, k);
  if (tc.delta) {
    r.hypotheses.push_back(Flag::compared("|A| >= C(n,k) - C(n-s,k) - delta C(n-s,k-1)",
                                          compare_exact(size, Relation::ge, base - *tc.delta * bin(n - s, k - 1)),
                                          Relation::ge));
  } else {
    r.hypotheses.push_back(Flag::unknown("|A| >= C(n,k) - C(n-s,k) - delta C(n-s,k-1)", to_string(size), ">=",
                                         to_string(base) + " - delta " + to_string(bin(n - s, k - 1)),
                                         "constant unknown: supply delta"));
  }
  if (tc.c && tc.delta) {
    // the follow-up remark's rate, eps = (c delta)^(log_{1 - s p1} p1), p1 = k/n
    const Rational p1(k, n);
    if (s * p1 < 1 && *tc.c * *tc.delta > 0) {
      Value rate = power_log(num(*tc.c * *tc.delta), num(1 - s * p1), num(p1));
      r.add_value("remark_eps", rate.str());
    }
  }
  (void)tol;
  auto near = nearest_or(a, tc.t);
  umvirate_witness(r, near, "or");
  const Rational bound = tc.eps * bin(n - s, k);
  r.add_value("size", to_string(size));
  r.add_value("bound", to_string(bound));
  conclude(r, Flag::compared("|A \\ OR_B| <= eps C(n-s,k)", compare_exact(near.residual, Relation::le, bound), Relation::le));
  return r;
}

VerdictReport frankl_gi(const TheoremCase& tc, const SetFamily& f, const Tolerance& tol) {
  (void)tol;
  VerdictReport r = start(tc);
  r.inputs["n"] = f.n();
  const unsigned i = tc.i;
  const Rational& p = tc.p;
  r.hypotheses.push_back(Flag::boolean("intersecting", is_t_intersecting(f, 1)));
  r.hypotheses.push_back(Flag::compared("p < 1/2", compare_exact(p, Relation::lt, Rational(1, 2)), Relation::lt));
  r.hypotheses.push_back(Flag::boolean("3 <= i <= n", i >= 3 && i <= f.n()));
  const Rational m = mu(f, p);
  const Rational tail = (1 - p) * pow(p, i - 1);
  const Rational target = p * (1 - pow(1 - p, i - 1)) + tail;
  r.hypotheses.push_back(Flag::compared("mu_p(F) > mu_p(G_i)", compare_exact(m, Relation::gt, target), Relation::gt));
  auto near = nearest_umvirate(f, 1, p);
  umvirate_witness(r, near, "umvirate");
  r.add_value("mu", to_string(m));
  r.add_value("bound", to_string(tail));
  conclude(r, Flag::compared("residual < (1-p) p^(i-1)", compare_exact(near.residual, Relation::lt, tail), Relation::lt));
  return r;
}

}  // namespace

const char* theorem_name(TheoremId id) {
  for (const auto& t : kTheorems)
    if (t.id == id) return t.name;
  return "?";
}

TheoremId parse_theorem(const std::string& name) {
  for (const auto& t : kTheorems)
    if (name == t.name) return t.id;
  throw std::invalid_argument("unknown theorem '" + name + "'");
}

const std::vector<TheoremId>& all_theorems() {
  static const std::vector<TheoremId> ids = [] {
    std::vector<TheoremId> v;
    for (const auto& t : kTheorems) v.push_back(t.id);
    return v;
  }();
  return ids;
}

Json to_json(const TheoremCase& tc) {
  Json j;
  j["theorem"] = theorem_name(tc.id);
  switch (tc.id) {
    case TheoremId::main_biased:
    case TheoremId::dual_biased: j["p0"] = to_string(tc.p0); break;
    default: break;
  }
  switch (tc.id) {
    case TheoremId::wilson_uniform:
    case TheoremId::triangle_uniform:
    case TheoremId::matching_uniform: break;
    default: j["p"] = to_string(tc.p);
  }
  switch (tc.id) {
    case TheoremId::dual_biased:
    case TheoremId::matching_biased:
    case TheoremId::matching_uniform: j["s"] = tc.t; break;
    case TheoremId::main_biased:
    case TheoremId::t_intersecting_biased:
    case TheoremId::wilson_uniform: j["t"] = tc.t; break;
    default: break;
  }
  if (tc.id == TheoremId::frankl_gi) j["i"] = tc.i;
  if (tc.id == TheoremId::wilson_uniform || tc.id == TheoremId::triangle_uniform) j["d"] = tc.d;
  if (tc.id != TheoremId::frankl_gi && tc.id != TheoremId::wilson_uniform && tc.id != TheoremId::triangle_uniform)
    j["eps"] = to_string(tc.eps);
  if (tc.C) j["C"] = to_string(*tc.C);
  if (tc.c) j["c"] = to_string(*tc.c);
  if (tc.delta0) j["delta0"] = to_string(*tc.delta0);
  if (tc.delta) j["delta"] = to_string(*tc.delta);
  if (tc.n0) j["n0"] = *tc.n0;
  if (tc.t_replaced) j["t_replaced"] = true;
  return j;
}

TheoremCase parse_theorem_case(const Json& j) {
  TheoremCase tc;
  tc.id = parse_theorem(j.at("theorem").get<std::string>());
  if (auto v = opt_rational(j, "p0")) tc.p0 = *v;
  if (auto v = opt_rational(j, "p")) tc.p = *v;
  if (auto v = opt_rational(j, "eps")) tc.eps = *v;
  if (j.contains("t")) tc.t = j.at("t").get<unsigned>();
  if (j.contains("s")) tc.t = j.at("s").get<unsigned>();
  if (j.contains("i")) tc.i = j.at("i").get<unsigned>();
  if (j.contains("d")) tc.d = j.at("d").get<unsigned>();
  tc.C = opt_rational(j, "C");
  tc.c = opt_rational(j, "c");
  tc.delta0 = opt_rational(j, "delta0");
  tc.delta = opt_rational(j, "delta");
  if (j.contains("n0")) tc.n0 = j.at("n0").get<unsigned>();
  tc.t_replaced = j.value("t_replaced", false);
  return tc;
}

VerdictReport check_theorem(const TheoremCase& tc, const TheoremFamily& f, const Tolerance& tol) {
  const char* name = theorem_name(tc.id);
  const bool biased = tc.id != TheoremId::wilson_uniform && tc.id != TheoremId::triangle_uniform &&
                      tc.id != TheoremId::matching_uniform;
  if (biased) check_probability(tc.p, true);
  require_eps(tc.eps);
  switch (tc.id) {
    case TheoremId::main_biased: return main_like(tc, dense_of(f, name), tc.p0, tc.t, tol);
    case TheoremId::biased1: {
      VerdictReport r = main_like(tc, dense_of(f, name), Rational(1, 2), 1, tol);
      r.hypotheses[1].name = "p < 1/2";
      r.hypotheses[2].name = "mu_1/2(F) <= 1/2";
      return r;
    }
    case TheoremId::t_intersecting_biased: return t_intersecting_biased(tc, dense_of(f, name), tol);
    case TheoremId::dual_biased: return dual_like(tc, dense_of(f, name), tc.p0, false, tol);
    case TheoremId::matching_biased: return dual_like(tc, dense_of(f, name), Rational(1, 2 * tc.t + 1), true, tol);
    case TheoremId::wilson_uniform: return wilson_uniform(tc, uniform_of(f, name), tol);
    case TheoremId::triangle_biased: return triangle_biased(tc, graph_of(f, name), tol);
    case TheoremId::triangle_uniform: return triangle_uniform(tc, graph_of(f, name), tol);
    case TheoremId::matching_uniform: return matching_uniform(tc, uniform_of(f, name), tol);
    case TheoremId::frankl_gi: return frankl_gi(tc, dense_of(f, name), tol);
  }
  throw std::invalid_argument("unknown theorem");
}

// ------------------------------------------------------------ bootstrapping

namespace {

struct Split {
  Rational outside;  // mu_p(F \ S_[t])
  Rational inside;   // mu_p(F ∩ S_[t])
};

Split split_at(const SetFamily& f, unsigned t, const Rational& p) {
  const SetFamily head = umvirate(f.n(), prefix_mask(t));
  return {mu(f - head, p), mu(f & head, p)};
}

void all_parts(VerdictReport& r) {
  bool unresolved = false, failed = false;
  for (const auto& part : r.parts) {
    unresolved |= part.state == FlagState::unresolved;
    failed |= part.state == FlagState::fails;
  }
  if (r.any_failed()) {
    r.finalize();
    return;
  }
  if (unresolved && !failed) {
    r.conclusion = Flag::unknown("all parts hold", "", "", "", "a part is unresolved");
  } else {
    r.conclusion = Flag::boolean("all parts hold", !failed);
  }
  r.finalize();
}

}  // namespace

VerdictReport bootstrap_diagnostics(const SetFamily& f, const Rational& p0, const Rational& p, unsigned t,
                                    const Tolerance& tol) {
  check_probability(p0, true);
  check_probability(p, true);
  require_t(t, f.n(), "bootstrap");
  VerdictReport r;
  r.check = "bootstrap";
  r.inputs = {{"n", f.n()}, {"p0", to_string(p0)}, {"p", to_string(p)}, {"t", t}};
  r.hypotheses.push_back(Flag::boolean("increasing", f.is_increasing()));
  r.hypotheses.push_back(Flag::compared("p < p0", compare_exact(p, Relation::lt, p0), Relation::lt));
  const Rational unit = (1 - p) * pow(p, t - 1);
  const Split at_p = split_at(f, t, p);
  const Rational delta = at_p.outside / unit;
  r.hypotheses.push_back(Flag::compared("delta < 1", compare_exact(delta, Relation::lt, Rational(1)), Relation::lt));
  r.add_value("delta", to_string(delta));
  if (delta == 0) r.notes.push_back("F ⊆ S_[t]: delta = 0 and both parts are trivial");

  // (a) mu_p0(F \ S_[t]) >= (1-p0) p0^(t-1) delta^(log_p p0)
  const Split at_p0 = split_at(f, t, p0);
  Value rhs_a = num((1 - p0) * pow(p0, t - 1)) * power_log(num(delta), num(p), num(p0));
  r.parts.push_back(check("(a) mu_p0(F \\ S_[t]) lower bound", num(at_p0.outside), Relation::ge, rhs_a, tol));

  // (b) mu_p(F ∩ S_[t]) <= p^t (1 - scale delta^exponent), given mu_p0(F) <= p0^t
  Comparison cap = compare_exact(at_p0.outside + at_p0.inside, Relation::le, pow(p0, t));
  Value term = bootstrap_term(num(delta), num(p), num(p0));
  Value rhs_b = num(pow(p, t)) * (one() - term);
  if (cap.holds) {
    r.parts.push_back(check("(b) mu_p(F ∩ S_[t]) upper bound", num(at_p.inside), Relation::le, rhs_b, tol));
  } else {
    r.parts.push_back(Flag::unknown("(b) mu_p(F ∩ S_[t]) upper bound", to_string(at_p.inside), "<=", rhs_b.str(),
                                    "needs mu_p0(F) <= p0^t, got " + cap.lhs + " > " + cap.rhs));
  }
  r.add_value("decay_term", term.str());
  all_parts(r);
  return r;
}

VerdictReport bootstrap_intersecting(const SetFamily& f, const Rational& p, unsigned t, const Tolerance& tol) {
  check_probability(p, true);
  require_t(t, f.n(), "bootstrap_intersecting");
  VerdictReport r;
  r.check = "bootstrap_intersecting";
  r.inputs = {{"n", f.n()}, {"p", to_string(p)}, {"t", t}};
  r.hypotheses.push_back(Flag::boolean("increasing", f.is_increasing()));
  r.hypotheses.push_back(Flag::boolean("t-intersecting", is_t_intersecting(f, t)));
  r.hypotheses.push_back(Flag::compared("p <= 1/2", compare_exact(p, Relation::le, Rational(1, 2)), Relation::le));
  const Split at_p = split_at(f, t, p);
  const Rational delta = at_p.outside / ((1 - p) * pow(p, t - 1));
  r.add_value("delta", to_string(delta));
  Value term = intersecting_term(num(delta), num(p), mersenne(t));
  r.add_value("decay_term", term.str());
  Value rhs = num(pow(p, t)) * (one() - term);
  r.parts.push_back(check("mu_p(F ∩ S_[t]) upper bound", num(at_p.inside), Relation::le, rhs, tol));
  all_parts(r);
  return r;
}

// ------------------------------------------------------------- tightness

VerdictReport tightness_report(const FamilySpec& spec, const Rational& p, const Tolerance& tol) {
  check_probability(p, true);
  const std::string& nm = spec.name;
  if (nm != "tilde_Gi" && nm != "tilde_H_tsr" && nm != "tilde_F_ts" && nm != "tilde_D_sdl")
    throw std::invalid_argument("tightness_report: no tightness claim for " + nm);
  const SetFamily f = *construct(spec).dense;
  const unsigned n = f.n();
  const auto profile = f.weight_profile();
  VerdictReport r;
  r.check = "tightness";
  r.inputs = to_json(spec);
  r.inputs["p"] = to_string(p);
  const Value P = num(p), Q = num(1 - p);
  const Rational m = mu(f, p);
  r.add_value("mu", to_string(m));

  auto root = [&](long a, long b) -> Value {
    if (a < 2 || b < 2) throw std::invalid_argument("tightness_report: the defining root needs both parameters >= 2");
    if (a == b) return num(Rational(1, 2));
    const unsigned ua = static_cast<unsigned>(a), ub = static_cast<unsigned>(b);
    return lazy([ua, ub](mpfr_prec_t bits) { return defining_root(ua, ub, bits).value; });
  };

  if (nm == "tilde_Gi" || nm == "tilde_H_tsr" || nm == "tilde_F_ts") {
    unsigned t = 1;
    Rational eps;
    Value term;
    if (nm == "tilde_Gi") {
      const long i = spec.get("i");
      eps = pow(p, static_cast<unsigned>(i - 1));
      term = bootstrap_term(num(eps), P, num(Rational(1, 2)));
    } else if (nm == "tilde_H_tsr") {
      t = static_cast<unsigned>(spec.get("t"));
      const long s = spec.get("s"), rr = spec.get("r");
      eps = pow(p, static_cast<unsigned>(s));
      Value p0 = root(rr, s);
      r.add_value("p0", p0.str());
      r.hypotheses.push_back(check("p < p0", P, Relation::lt, p0, tol));
      r.parts.push_back(check("mu_p0 = p0^t", mu_at(profile, n, p0), Relation::eq, ipow(p0, t), tol));
      term = bootstrap_term(num(eps), P, p0);
    } else {
      t = static_cast<unsigned>(spec.get("t"));
      eps = t * pow(p, static_cast<unsigned>(spec.get("s")));
      term = intersecting_term(num(eps), P, Rational(t));
      r.notes.push_back("condition with t in place of 2^t - 1");
    }
    const Rational unit = (1 - p) * pow(p, t - 1);
    Value rhs = ipow(P, t) * (one() - term) + num(unit * eps);
    r.add_value("eps", to_string(eps));
    r.parts.push_back(check("condition equality", num(m), Relation::eq, rhs, tol));
    // The identities are stated for S_[t]; the nearest umvirate can be closer
    // when the family degenerates (tilde_F_ts with s = 1).
    const Rational designated = mu(f - umvirate(n, prefix_mask(t)), p);
    auto near = nearest_umvirate(f, t, p);
    umvirate_witness(r, near, "umvirate");
    if (near.residual < designated) r.notes.push_back("a different umvirate is closer than S_[t]");
    r.add_value("residual_S_[t]", to_string(designated));
    r.parts.push_back(check("conclusion equality", num(designated), Relation::eq, num(unit * eps), tol));
  } else {
    const unsigned s = static_cast<unsigned>(spec.get("s"));
    const long d = spec.get("d"), l = spec.get("l");
    const Rational eps = pow(p, static_cast<unsigned>(l));
    Value p0 = root(d, l);
    r.add_value("p0", p0.str());
    r.add_value("eps", to_string(eps));
    r.hypotheses.push_back(check("p < p0", P, Relation::lt, p0, tol));
    r.parts.push_back(check("mu_p0 = 1 - (1-p0)^s", mu_at(profile, n, p0), Relation::eq, one() - ipow(one() - p0, s), tol));
    Value term = bootstrap_term(num(eps), P, p0);
    Value rhs = one() - ipow(Q, s - 1) + ipow(Q, s - 1) * (P * (one() - term) + Q * num(eps));
    r.parts.push_back(check("condition equality", num(m), Relation::eq, rhs, tol));
    const Rational designated = mu(f - or_family(n, prefix_mask(s)), p);
    auto near = nearest_or(f, s, p);
    umvirate_witness(r, near, "or");
    if (near.residual < designated) r.notes.push_back("a different OR-family is closer than OR_[s]");
    r.add_value("residual_OR_[s]", to_string(designated));
    r.parts.push_back(check("conclusion equality", num(designated), Relation::eq, num(pow(1 - p, s) * eps), tol));
  }
  all_parts(r);
  return r;
}

// ---------------------------------------------------------------- scans

namespace {

struct ConjInfo {
  ConjectureId id;
  const char* name;
};
const ConjInfo kConjectures[] = {
    {ConjectureId::t_intersecting_sharp, "TIntersectingSharp"},
    {ConjectureId::wilson_sharp, "WilsonSharp"},
    {ConjectureId::emc_stability, "EMCStability"},
};

struct TupleResult {
  ScanTuple tuple;
  std::vector<ScanCandidate> candidates;
};

Rational from_real(const Real& x) { return Rational(x.to_double()); }

// g(eps) = p^t (1 - (eps/t)^v) + (1-p) p^(t-1) eps
Value sharp_condition(const Rational& eps, const Rational& p, unsigned t) {
  return ipow(num(p), t) * (one() - intersecting_term(num(eps), num(p), Rational(t))) +
         num((1 - p) * pow(p, t - 1) * eps);
}

void scan_t_intersecting(unsigned n, unsigned t, const Rational& p, const Tolerance& tol, TupleResult& out) {
  const Rational threshold = (t + 2) * pow(p, t + 1) - (t + 1) * pow(p, t + 2);
  const Rational unit = (1 - p) * pow(p, t - 1);
  const mpfr_prec_t bits = tol.bits;
  const Real P(p, bits), One(1L, bits), T(static_cast<long>(t), bits);
  const Real v = log_base(One - P, P);
  // stationary point of the convex function g
  const Real eps_star = T * pow(T * (One - P) / (P * v), One / (v - One));
  enumerate_monotone(n, [&](const SetFamily& f) {
    if (!is_t_intersecting(f, t)) return;
    ++out.tuple.families;
    const Rational m = mu(f, p);
    if (m < threshold) return;
    const auto near = nearest_umvirate(f, t, p);
    const Rational delta = near.residual / unit;
    if (delta == 0) return;
    // A counterexample needs some eps < delta with g(eps) <= mu.
    std::optional<Rational> witness;
    const Real d_real(delta, bits);
    auto accept = [&](const Rational& eps) {
      if (eps <= 0 || eps >= delta) return false;
      Comparison c = compare(num(m), Relation::ge, sharp_condition(eps, p, t), tol);
      return c.holds && !c.near_boundary;
    };
    if (eps_star < d_real) {
      Rational e = from_real(eps_star);
      if (accept(e)) witness = e;
    } else {
      for (unsigned j = 4; j <= 60 && !witness; j += 4) {
        Rational e = delta * (1 - Rational(BigInt(1), BigInt(1) << j));
        if (accept(e)) witness = e;
      }
    }
    if (!witness) return;
    ScanCandidate cand;
    cand.params = out.tuple.params;
    cand.n = n;
    cand.members = f.members();
    cand.details = {{"mu", to_string(m)},
                    {"eps", to_string(*witness)},
                    {"condition_rhs", sharp_condition(*witness, p, t).str()},
                    {"nearest", set_json(near.b)},
                    {"residual", to_string(near.residual)},
                    {"bound", to_string(unit * *witness)},
                    {"at_threshold", m == threshold}};
    out.candidates.push_back(std::move(cand));
  });
}

std::size_t clamp_size(const BigInt& x) { return x <= 0 ? 0 : static_cast<std::size_t>(x.get_ui()); }

void scan_wilson(unsigned n, unsigned k, unsigned t, unsigned d, std::uint64_t node_limit, TupleResult& out) {
  const long N = n, K = k, T = t, D = d;
  const BigInt first = (T + 2) * binom(N - T - 2, K - T - 1) - (T + 1) * binom(N - T - 2, K - T - 2);
  const BigInt bound = T * binom(N - T - D, K - T - D + 1);
  const BigInt second = binom(N - T, K - T) - binom(N - T - D, K - T) + bound;
  const BigInt threshold = std::max(first, second);
  out.tuple.params["threshold"] = to_string(threshold);
  out.tuple.params["bound"] = to_string(bound);
  const Predicate pred = t == 1 ? Predicate::intersecting : Predicate::t_intersecting;
  auto res = enumerate_maximal(
      n, k, pred, t, clamp_size(threshold),
      [&](const std::vector<Mask>& fam) {
        const auto near = nearest_umvirate(UniformFamily::from_members(n, k, fam), t);
        if (near.residual <= Rational(bound)) return;
        ScanCandidate cand;
        cand.params = out.tuple.params;
        cand.n = n;
        cand.members = fam;
        cand.details = {{"size", fam.size()},
                        {"nearest", set_json(near.b)},
                        {"residual", to_string(near.residual)},
                        {"bound", to_string(bound)},
                        {"at_threshold", BigInt(static_cast<unsigned long>(fam.size())) == threshold}};
        out.candidates.push_back(std::move(cand));
      },
      node_limit);
  out.tuple.families = res.families;
  out.tuple.complete = res.complete;
}

void scan_emc(unsigned n, unsigned k, unsigned s, unsigned d, std::uint64_t node_limit, TupleResult& out) {
  const long N = n, K = k, S = s, D = d;
  const BigInt bound = binom(N - S - D, K - D);
  const BigInt threshold =
      std::max(BigInt(binom(K * (S + 1) - 1, K) + 1), BigInt(binom(N, K) - binom(N - S, K) - binom(N - S - D, K - 1) + bound));
  out.tuple.params["threshold"] = to_string(threshold);
  out.tuple.params["bound"] = to_string(bound);
  auto res = enumerate_maximal(
      n, k, Predicate::matching_at_most, s, clamp_size(threshold),
      [&](const std::vector<Mask>& fam) {
        if (matching_number(std::span<const Mask>(fam)) != s) return;
        const auto near = nearest_or(UniformFamily::from_members(n, k, fam), s);
        if (near.residual <= Rational(bound)) return;
        ScanCandidate cand;
        cand.params = out.tuple.params;
        cand.n = n;
        cand.members = fam;
        cand.details = {{"size", fam.size()},
                        {"nearest", set_json(near.b)},
                        {"residual", to_string(near.residual)},
                        {"bound", to_string(bound)},
                        {"at_threshold", BigInt(static_cast<unsigned long>(fam.size())) == threshold}};
        out.candidates.push_back(std::move(cand));
      },
      node_limit);
  out.tuple.families = res.families;
  out.tuple.complete = res.complete;
}

}  // namespace

const char* conjecture_name(ConjectureId id) {
  for (const auto& c : kConjectures)
    if (c.id == id) return c.name;
  return "?";
}

ConjectureId parse_conjecture(const std::string& name) {
  for (const auto& c : kConjectures)
    if (name == c.name) return c.id;
  throw std::invalid_argument("unknown conjecture '" + name + "'");
}

Json ScanReport::to_json() const {
  Json j;
  j["conjecture"] = conjecture_name(conjecture);
  j["complete"] = complete;
  j["counterexamples"] = candidates.size();
  Json ts = Json::array();
  for (const auto& t : tuples) {
    Json e;
    e["params"] = t.params;
    if (!t.skipped.empty()) {
      e["skipped"] = t.skipped;
    } else {
      e["families"] = t.families;
      e["complete"] = t.complete;
    }
    ts.push_back(std::move(e));
  }
  j["tuples"] = std::move(ts);
  Json cs = Json::array();
  for (const auto& c : candidates) {
    Json e;
    e["params"] = c.params;
    e["family"] = family_json(c.n, c.members);
    e["details"] = c.details;
    cs.push_back(std::move(e));
  }
  j["candidates"] = std::move(cs);
  return j;
}

ScanReport conjecture_scan(ConjectureId id, const ScanRanges& ranges, const Tolerance& tol) {
  // Expand the grid in canonical order; invalid tuples are kept as skipped.
  std::vector<TupleResult> work;
  auto add = [&](Json params, std::string skip) {
    TupleResult tr;
    tr.tuple.params = std::move(params);
    tr.tuple.skipped = std::move(skip);
    work.push_back(std::move(tr));
  };
  if (id == ConjectureId::t_intersecting_sharp) {
    for (unsigned n : ranges.n)
      for (unsigned t : ranges.t)
        for (const Rational& p : ranges.p) {
          Json params = {{"n", n}, {"t", t}, {"p", to_string(p)}};
          std::string skip;
          if (n > 6) skip = "n > 6";
          else if (t < 1 || t > n) skip = "needs 1 <= t <= n";
          else if (p <= 0 || p >= Rational(1, t + 1)) skip = "needs 0 < p < 1/(t+1)";
          add(std::move(params), std::move(skip));
        }
  } else {
    for (unsigned n : ranges.n)
      for (unsigned k : ranges.k)
        for (unsigned t : ranges.t)
          for (unsigned d : ranges.d) {
            const bool wilson = id == ConjectureId::wilson_sharp;
            Json params = {{"n", n}, {"k", k}, {wilson ? "t" : "s", t}, {"d", d}};
            std::string skip;
            if (k < 1 || k > n || t < 1 || d < 1) skip = "parameters out of range";
            else if (binom(n, k) > 64) skip = "C(n,k) > 64";
            else if (wilson && (k < t || n < (t + 1) * (k - t + 1))) skip = "needs n >= (t+1)(k-t+1)";
            else if (!wilson && n < (t + 1) * k) skip = "needs n >= (s+1)k";
            add(std::move(params), std::move(skip));
          }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      TupleResult& tr = work[i];
      if (!tr.tuple.skipped.empty()) continue;
      const Json& pr = tr.tuple.params;
      switch (id) {
        case ConjectureId::t_intersecting_sharp:
          scan_t_intersecting(pr["n"].get<unsigned>(), pr["t"].get<unsigned>(), parse_rational(pr["p"].get<std::string>()), tol, tr);
          break;
        case ConjectureId::wilson_sharp: scan_wilson(pr["n"].get<unsigned>(), pr["k"].get<unsigned>(), pr["t"].get<unsigned>(), pr["d"].get<unsigned>(), ranges.node_limit, tr); break;
        case ConjectureId::emc_stability: scan_emc(pr["n"].get<unsigned>(), pr["k"].get<unsigned>(), pr["s"].get<unsigned>(), pr["d"].get<unsigned>(), ranges.node_limit, tr); break;
      }
    }
  };
  const unsigned nt = std::max(1u, ranges.threads);
  if (nt == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ScanReport rep;
  rep.conjecture = id;
  for (auto& tr : work) {
    rep.complete = rep.complete && tr.tuple.complete;
    rep.tuples.push_back(tr.tuple);
    for (auto& c : tr.candidates) rep.candidates.push_back(std::move(c));
  }
  return rep;
}

}  // namespace ekrlab
