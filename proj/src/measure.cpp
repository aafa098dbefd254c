#include "ekrlab/measure.hpp"

#include <stdexcept>

namespace ekrlab {

void check_probability(const Rational& p, bool open) {
  if (open ? (p <= 0 || p >= 1) : (p < 0 || p > 1))
    throw std::invalid_argument("p = " + to_string(p) + (open ? " must lie in (0,1)" : " must lie in [0,1]"));
}

namespace {

std::vector<std::uint64_t> profile_of(const std::vector<Word>& words) {
  std::vector<std::uint64_t> counts(7 + 32, 0);
  kernels::active().weight_profile(words.data(), words.size(), counts.data());
  return counts;
}

SetFamily pivot_raw(const SetFamily& f, unsigned coord0) {
  std::vector<Word> out(f.words().size());
  kernels::active().pivot(out.data(), f.words().data(), out.size(), coord0);
  return SetFamily::from_words(f.n(), std::move(out));
}

}  // namespace

Rational mu_from_profile(std::span<const std::uint64_t> counts, unsigned n, const Rational& p) {
  check_probability(p, false);
  const Rational q = 1 - p;
  Rational total = 0;
  for (unsigned j = 0; j <= n && j < counts.size(); ++j) {
    if (counts[j] == 0) continue;
    BigInt c;
    mpz_set_ui(c.get_mpz_t(), counts[j]);
    total += Rational(c) * pow(p, j) * pow(q, n - j);
  }
  return total;
}

Rational mu(const SetFamily& f, const Rational& p) { return mu_from_profile(f.weight_profile(), f.n(), p); }

MeasurePolynomial mu_polynomial(const SetFamily& f) {
  return MeasurePolynomial::from_weight_profile(f.weight_profile(), f.n());
}

SetFamily pivotal_set(const SetFamily& f, unsigned coord) {
  if (coord < 1 || coord > f.n()) throw std::invalid_argument("coordinate out of range");
  return pivot_raw(f, coord - 1);
}

InfluenceVector influence_polynomials(const SetFamily& f) {
  InfluenceVector iv;
  for (unsigned i = 0; i < f.n(); ++i) {
    SetFamily piv = pivot_raw(f, i);
    iv.per_coordinate.push_back(MeasurePolynomial::from_weight_profile(profile_of(piv.words()), f.n()));
    iv.total += iv.per_coordinate.back();
  }
  return iv;
}

InfluenceValues influence(const SetFamily& f, const Rational& p) {
  check_probability(p, true);
  InfluenceValues out;
  out.total = 0;
  for (unsigned i = 0; i < f.n(); ++i) {
    SetFamily piv = pivot_raw(f, i);
    out.per_coordinate.push_back(mu_from_profile(profile_of(piv.words()), f.n(), p));
    out.total += out.per_coordinate.back();
  }
  return out;
}

bool is_subcube(const SetFamily& f) {
  if (f.empty()) return false;
  const Mask u = f.universe();
  Mask ones = u, zeros = u;
  f.for_each([&](Mask x) {
    ones &= x;
    zeros &= ~x & u;
  });
  return f.size() == (std::uint64_t{1} << (f.n() - popcount(ones | zeros)));
}

EdgeBoundary edge_boundary(const SetFamily& f, bool list_edges, const Tolerance& tol) {
  EdgeBoundary eb;
  const auto& k = kernels::active();
  for (unsigned i = 0; i < f.n(); ++i) {
    SetFamily piv = pivot_raw(f, i);
    eb.count += k.popcount(piv.words().data(), piv.words().size()) / 2;
    if (list_edges) {
      const Mask bit = Mask{1} << i;
      piv.for_each([&](Mask x) {
        if (!(x & bit)) eb.edges.push_back({x, i + 1});
      });
    }
  }
  eb.subcube = is_subcube(f);
  const std::uint64_t size = f.size();
  if (size > 0) {
    const unsigned n = f.n();
    const std::uint64_t count = eb.count;
    // |A| log2(2^n/|A|) = |A| (n - log2 |A|)
    auto rhs = [size, n](mpfr_prec_t bits) {
      Real a(static_cast<long>(size), bits);
      return a * (Real(static_cast<long>(n), bits) - log_base(a, Real(2, bits)));
    };
    auto lhs = [count](mpfr_prec_t bits) { return Real(static_cast<long>(count), bits); };
    eb.iso = compare_real(lhs, Relation::ge, rhs, tol, std::to_string(count));
  }
  return eb;
}

RussoCheck russo_identity(const SetFamily& f) {
  if (!f.is_increasing()) throw std::invalid_argument("russo_identity: family is not increasing");
  RussoCheck r;
  r.derivative = mu_polynomial(f).derivative();
  r.total_influence = influence_polynomials(f).total;
  r.holds = r.derivative == r.total_influence;
  return r;
}

IsoSlack iso_slack(const SetFamily& f, const Rational& p, const Tolerance& tol) {
  check_probability(p, true);
  IsoSlack s;
  s.increasing = f.is_increasing();
  s.increasing_subcube = is_increasing_subcube(f);
  s.mu = mu(f, p);
  s.total_influence = influence(f, p).total;
  if (!s.increasing && p > Rational(1, 2)) {
    s.status = IsoStatus::skipped;
    s.reason = "non-increasing family with p > 1/2";
    return s;
  }
  if (s.mu == 0 || s.mu == 1) {
    s.status = IsoStatus::vacuous;
    s.reason = "degenerate, vacuous";
    return s;
  }
  s.status = IsoStatus::checked;
  const Rational lhs_exact = p * s.total_influence;
  const Rational m = s.mu;
  const Rational pp = p;
  auto lhs = [lhs_exact](mpfr_prec_t bits) { return Real(lhs_exact, bits); };
  auto rhs = [m, pp](mpfr_prec_t bits) {
    Real mr(m, bits);
    return mr * log_base(mr, Real(pp, bits));
  };
  s.check = compare_real(lhs, Relation::ge, rhs, tol, to_string(lhs_exact));
  s.equality = s.check->equality;
  bool expected = s.increasing_subcube || (p == Rational(1, 2) && is_subcube(f));
  s.consistent = s.equality == expected;
  return s;
}

LogMeasureProfile log_measure_profile(const SetFamily& f, std::span<const Rational> grid, const Tolerance& tol) {
  if (!f.is_increasing()) throw std::invalid_argument("log_measure_profile: family is not increasing");
  if (f.empty() || f.size() == (std::uint64_t{1} << f.n()))
    throw std::invalid_argument("log_measure_profile: degenerate family (empty or all subsets)");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    check_probability(grid[i], true);
    if (i > 0 && grid[i] <= grid[i - 1]) throw std::invalid_argument("log_measure_profile: grid must be strictly increasing");
  }
  LogMeasureProfile out;
  out.increasing_subcube = is_increasing_subcube(f);
  const MeasurePolynomial poly = mu_polynomial(f);
  const Real tau(tol.tau, tol.bits);
  for (const Rational& p : grid) {
    Real m(poly(p), tol.bits);
    out.points.emplace_back(p, log_base(m, Real(p, tol.bits)));
  }
  for (std::size_t i = 1; i < out.points.size(); ++i) {
    Real drop = out.points[i - 1].second - out.points[i].second;
    if (drop < -tau) out.non_increasing = false;
    if (drop > tau) out.strictly_decreasing_somewhere = true;
  }
  // One grid point cannot show a decrease; only judge with two or more.
  if (out.points.size() >= 2) out.consistent = out.strictly_decreasing_somewhere != out.increasing_subcube;
  return out;
}

Real transfer_bound(const TransferMode& mode, const Rational& q, mpfr_prec_t bits) {
  Real qr(q, bits), one(1, bits), t(mode.t, bits);
  switch (mode.kind) {
    case TransferMode::umvirate: return pow(qr, t);
    case TransferMode::or_form: return one - pow(one - qr, t);
    case TransferMode::lex: return pow(qr, t) * (one - pow(one - qr, Real(mode.x, bits)));
  }
  return qr;
}

std::optional<Rational> transfer_bound_exact(const TransferMode& mode, const Rational& q) {
  auto nat = [](const Rational& r) { return is_integer(r) && r >= 0 && r <= 4096; };
  if (!nat(mode.t) || (mode.kind == TransferMode::lex && !nat(mode.x))) return std::nullopt;
  unsigned t = static_cast<unsigned>(mode.t.get_num().get_ui());
  switch (mode.kind) {
    case TransferMode::umvirate: return pow(q, t);
    case TransferMode::or_form: return 1 - pow(1 - q, t);
    case TransferMode::lex: return pow(q, t) * (1 - pow(1 - q, static_cast<unsigned>(mode.x.get_num().get_ui())));
  }
  return std::nullopt;
}

namespace {

const char* mode_name(TransferMode::Kind k) {
  switch (k) {
    case TransferMode::umvirate: return "umvirate";
    case TransferMode::or_form: return "or";
    case TransferMode::lex: return "lex";
  }
  return "?";
}

Comparison measure_le_bound(const Rational& m, const TransferMode& mode, const Rational& q, const Tolerance& tol) {
  if (auto exact = transfer_bound_exact(mode, q)) return compare_exact(m, Relation::le, *exact);
  return compare_real([m](mpfr_prec_t bits) { return Real(m, bits); }, Relation::le,
                      [mode, q](mpfr_prec_t bits) { return transfer_bound(mode, q, bits); }, tol, to_string(m));
}

}  // namespace

VerdictReport measure_transfer_check(const SetFamily& f, const Rational& p0, const Rational& p, const TransferMode& mode,
                                     const Tolerance& tol) {
  check_probability(p0, true);
  check_probability(p, true);
  VerdictReport r;
  r.check = "measure_transfer";
  r.inputs["n"] = f.n();
  r.inputs["p0"] = to_string(p0);
  r.inputs["p"] = to_string(p);
  r.inputs["mode"] = mode_name(mode.kind);
  r.inputs["t"] = to_string(mode.t);
  if (mode.kind == TransferMode::lex) r.inputs["x"] = to_string(mode.x);

  r.hypotheses.push_back(Flag::boolean("increasing", f.is_increasing()));
  r.hypotheses.push_back(Flag::boolean("p < p0", p < p0));
  const MeasurePolynomial poly = mu_polynomial(f);
  const Rational m0 = poly(p0), m = poly(p);
  r.hypotheses.push_back(Flag::compared("mu_p0 <= bound(p0)", measure_le_bound(m0, mode, p0, tol), Relation::le));
  Comparison concl = measure_le_bound(m, mode, p, tol);
  r.conclusion = Flag::compared("mu_p <= bound(p)", concl, Relation::le);
  r.add_value("mu_p0", to_string(m0));
  r.add_value("mu_p", to_string(m));
  r.finalize();

  if (r.status == Status::holds && concl.equality && is_integer(mode.t) && mode.t >= 0) {
    const unsigned t = static_cast<unsigned>(mode.t.get_num().get_ui());
    bool extremal = false;
    if (mode.kind == TransferMode::umvirate) {
      extremal = is_increasing_subcube(f) && f.size() == (std::uint64_t{1} << (f.n() - std::min(t, f.n())));
      if (extremal) {
        Mask common = f.universe();
        f.for_each([&](Mask x) { common &= x; });
        r.witness = common;
        r.witness_kind = "umvirate";
      }
    } else if (mode.kind == TransferMode::or_form) {
      auto mins = minimal_members(f);
      extremal = !mins.empty() && std::all_of(mins.begin(), mins.end(), [](Mask x) { return popcount(x) == 1; }) &&
                 mins.size() == t;
      if (extremal) {
        Mask b = 0;
        for (Mask x : mins) b |= x;
        r.witness = b;
        r.witness_kind = "or";
      }
    }
    r.notes.push_back(extremal ? "equality; family is the extremal one" : "equality; family is not the extremal one");
  }
  return r;
}

VerdictReport cross_measure_bound(const SetFamily& f, const SetFamily& g, const Rational& p, const Tolerance& tol) {
  check_probability(p, true);
  if (f.n() != g.n()) throw std::invalid_argument("cross_measure_bound: families on different grounds");
  if (!are_cross_intersecting(f, g)) throw std::invalid_argument("cross_measure_bound: families are not cross-intersecting");
  VerdictReport r;
  r.check = "cross_measure_bound";
  r.inputs["n"] = f.n();
  r.inputs["p"] = to_string(p);
  r.hypotheses.push_back(Flag::boolean("F increasing", f.is_increasing()));
  r.hypotheses.push_back(Flag::boolean("G increasing", g.is_increasing()));
  r.hypotheses.push_back(Flag::boolean("p <= 1/2", p <= Rational(1, 2)));
  const Rational mf = mu(f, p), mg = mu(g, p);
  auto lhs = [mg](mpfr_prec_t bits) { return Real(mg, bits); };
  auto rhs = [mf, p](mpfr_prec_t bits) {
    Real one(1, bits), pr(p, bits);
    return pow(one - Real(mf, bits), log_base(pr, one - pr));
  };
  Comparison c;
  if (p == Rational(1, 2))
    c = compare_exact(mg, Relation::le, 1 - mf);  // exponent is exactly 1
  else
    c = compare_real(lhs, Relation::le, rhs, tol, to_string(mg));
  r.conclusion = Flag::compared("mu_p(G) <= (1 - mu_p(F))^log_{1-p}(p)", c, Relation::le);
  r.add_value("mu_p(F)", to_string(mf));
  r.add_value("mu_p(G)", to_string(mg));
  r.finalize();
  return r;
}

bool lex_less(Mask a, Mask b) {
  if (a == b) return false;
  const Mask d = a ^ b;
  const Mask e = d & (~d + 1);  // smallest element in exactly one of them
  const Mask above = ~((e << 1) - 1);
  if (a & e) return (b & above) != 0;  // b is a proper prefix of a unless b continues past e
  return (a & above) == 0;
}

SubcubeDistance subcube_distance(const SetFamily& f, const Rational& p, unsigned t_max) {
  check_probability(p, true);
  const unsigned n = f.n();
  const BigInt a = p.get_num(), b = p.get_den();
  const BigInt c = b - a;
  // Everything below is scaled by b^n: member A weighs a^|A| (b-a)^(n-|A|).
  std::vector<BigInt> apow(n + 1), bpow(n + 1), cpow(n + 1);
  apow[0] = bpow[0] = cpow[0] = 1;
  for (unsigned i = 1; i <= n; ++i) {
    apow[i] = apow[i - 1] * a;
    bpow[i] = bpow[i - 1] * b;
    cpow[i] = cpow[i - 1] * c;
  }
  BigInt mu_f = 0;
  f.for_each([&](Mask x) { mu_f += apow[popcount(x)] * cpow[n - popcount(x)]; });

  SubcubeDistance best;
  BigInt best_num;
  bool have = false;
  auto offer = [&](Mask set, const BigInt& inter) {
    // mu(F Δ S_B) = mu(F) + p^|B| - 2 mu(F ∩ S_B)
    BigInt d = mu_f + apow[popcount(set)] * bpow[n - popcount(set)] - 2 * inter;
    if (!have || d < best_num || (d == best_num && lex_less(set, best.b))) {
      best_num = d;
      best.b = set;
      have = true;
    }
  };

  if (n <= 20) {
    const Mask end = Mask{1} << n;
    std::vector<BigInt> sup(end);
    f.for_each([&](Mask x) { sup[x] = apow[popcount(x)] * cpow[n - popcount(x)]; });
    for (unsigned i = 0; i < n; ++i) {
      const Mask bit = Mask{1} << i;
      for (Mask x = 0; x < end; ++x)
        if (!(x & bit)) sup[x] += sup[x | bit];
    }
    for (Mask set = 0; set < end; ++set) offer(set, sup[set]);
  } else {
    const unsigned lim = std::min(t_max, n);
    // Subsets of size <= lim in increasing numeric order via Gosper per size.
    for (unsigned k = 0; k <= lim; ++k) {
      if (k == 0) {
        offer(0, mu_f);
        continue;
      }
      Mask set = prefix_mask(k);
      const Mask end = Mask{1} << n;
      while (set < end) {
        BigInt inter = 0;
        SetFamily r = restrict(f, set, set);
        auto prof = r.weight_profile();
        for (unsigned j = 0; j < prof.size() && j <= n - k; ++j) {
          if (prof[j] == 0) continue;
          BigInt cnt;
          mpz_set_ui(cnt.get_mpz_t(), prof[j]);
          inter += cnt * apow[j + k] * cpow[n - k - j];
        }
        offer(set, inter);
        const Mask lo = set & (~set + 1);
        const Mask hi = set + lo;
        set = hi | (((set ^ hi) >> 2) / lo);
      }
    }
  }
  best.distance = Rational(best_num, bpow[n]);
  best.distance.canonicalize();
  return best;
}

}  // namespace ekrlab
