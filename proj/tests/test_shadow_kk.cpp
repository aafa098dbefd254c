#include <algorithm>

#include "doctest.h"
#include "ekrlab/measure.hpp"
#include "ekrlab/shadow.hpp"
#include "oracle.hpp"

using namespace ekrlab;

namespace {

UniformFamily uni(unsigned n, unsigned k, std::vector<std::vector<int>> sets) {
  std::vector<Mask> m;
  for (auto& s : sets) m.push_back(mask_of(s));
  return UniformFamily::from_members(n, k, m);
}

UniformFamily full_slice(unsigned n, unsigned k) { return UniformFamily::from_members(n, k, oracle::k_sets(n, k)); }

// Minimal |∂^s A| (or |∂^{+s} A|) over all m-subsets A of [n]^(k).
std::size_t brute_min_shadow(unsigned n, unsigned k, unsigned m, unsigned s, bool upper) {
  auto all = oracle::k_sets(n, k);
  std::size_t best = SIZE_MAX;
  std::vector<bool> pick(all.size(), false);
  std::fill(pick.begin(), pick.begin() + m, true);
  do {
    std::vector<Mask> a;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (pick[i]) a.push_back(all[i]);
    std::vector<Mask> sh;
    for (Mask x : oracle::k_sets(n, upper ? k + s : k - s))
      for (Mask y : a)
        if (upper ? (x & y) == y : (x & y) == x) {
          sh.push_back(x);
          break;
        }
    best = std::min(best, sh.size());
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

// k-sets of [n] sorted by their element lists.
std::vector<Mask> lex_sorted(unsigned n, unsigned k) {
  auto v = oracle::k_sets(n, k);
  std::sort(v.begin(), v.end(), [](Mask a, Mask b) {
    auto ea = elements_of(a), eb = elements_of(b);
    return ea < eb;
  });
  return v;
}

}  // namespace

TEST_CASE("lower shadow examples") {
  CHECK(lower_shadow(uni(3, 3, {{1, 2, 3}})) == uni(3, 2, {{1, 2}, {1, 3}, {2, 3}}));
  for (unsigned n = 2; n <= 6; ++n)
    for (unsigned k = 1; k <= n; ++k) CHECK(lower_shadow(full_slice(n, k)) == full_slice(n, k - 1));
  auto colex3 = colex_segment(4, 2, 3).family();
  CHECK(lower_shadow(colex3) == uni(4, 1, {{1}, {2}, {3}}));
  CHECK(brute_min_shadow(4, 2, 3, 1, false) == 3);
  CHECK(lower_shadow(uni(5, 3, {{1, 2, 3}}), 2) == uni(5, 1, {{1}, {2}, {3}}));
  CHECK(lower_shadow(UniformFamily(5, 3), 1).empty());
  CHECK_THROWS(lower_shadow(uni(5, 2, {{1, 2}}), 3));
}

TEST_CASE("lower shadow matches the direct definition") {
  for (int trial = 0; trial < 30; ++trial) {
    unsigned n = 3 + trial % 4, k = 1 + trial % n;
    std::vector<Mask> members;
    for (Mask x : oracle::k_sets(n, k))
      if (support::rng()() % 3 == 0) members.push_back(x);
    auto got = lower_shadow(UniformFamily::from_members(n, k, members));
    CHECK(got.members() == oracle::lower_shadow(members));
  }
}

TEST_CASE("increasing shadow") {
  for (unsigned t = 1; t <= 3; ++t) CHECK(increasing_shadow(umvirate(4, prefix_mask(t)), t) == SetFamily::full(4));
  SetFamily s2 = umvirate(4, mask_of({1, 2}));
  SetFamily by_def = SetFamily::from_predicate(4, [&](Mask a) {
    for (unsigned c = 1; c <= 4; ++c)
      if (s2.contains(a | mask_of({static_cast<int>(c)}))) return true;
    return false;
  });
  CHECK(increasing_shadow(s2, 1) == by_def);
  CHECK(increasing_shadow(s2, 1) == or_family(4, mask_of({1, 2})));
  CHECK(increasing_shadow(SetFamily(4), 2).empty());
  CHECK_THROWS(increasing_shadow(umvirate(3, 1).complement(), 1));

  // general definition with overlapping C, against enumeration
  for (int trial = 0; trial < 20; ++trial) {
    unsigned n = 2 + trial % 5;
    SetFamily f = SetFamily::from_members(n, support::random_increasing(n, 2));
    SetFamily prev = f;
    for (unsigned s = 0; s <= n; ++s) {
      auto cs = oracle::k_sets(n, s);
      SetFamily want = SetFamily::from_predicate(n, [&](Mask a) {
        return std::any_of(cs.begin(), cs.end(), [&](Mask c) { return f.contains(a | c); });
      });
      SetFamily got = increasing_shadow(f, s);
      CHECK(got == want);
      CHECK(got.is_increasing());
      CHECK(f.is_subset_of(got));
      CHECK(prev.is_subset_of(got));
      prev = got;
    }
  }
}

TEST_CASE("upper shadow") {
  CHECK(upper_shadow(uni(3, 1, {{1}})) == uni(3, 2, {{1, 2}, {1, 3}}));
  for (unsigned n = 3; n <= 6; ++n)
    for (unsigned k = 0; k + 2 <= n; ++k) CHECK(upper_shadow(full_slice(n, k), 2) == full_slice(n, k + 2));
  CHECK_THROWS(upper_shadow(uni(3, 2, {{1, 2}}), 2));

  // increasing G: the upper shadow of a slice is the higher slice once k
  // reaches every minimal member; below that it can fall short
  bool fell_short = false;
  for (int trial = 0; trial < 15; ++trial) {
    SetFamily g = SetFamily::from_members(5, support::random_increasing(5, 3));
    unsigned top = 0;
    for (Mask x : minimal_members(g)) top = std::max(top, popcount(x));
    for (unsigned k = 0; k <= 5; ++k)
      for (unsigned k0 = k; k0 <= 5; ++k0) {
        auto lo = UniformFamily::slice(g, k);
        if (lo.empty()) continue;
        auto up = upper_shadow(lo, k0 - k);
        auto want = UniformFamily::slice(g, k0);
        if (k >= top)
          CHECK(up == want);
        else
          fell_short |= !(up == want);
        for (Mask x : up.members()) CHECK(want.contains(x));
      }
  }
  CHECK(fell_short);
}

TEST_CASE("upper and lower shadows are adjoint") {
  for (int trial = 0; trial < 20; ++trial) {
    unsigned n = 4 + trial % 3, k = 1 + trial % 2, s = 1 + trial % 2;
    std::vector<Mask> members;
    for (Mask x : oracle::k_sets(n, k))
      if (support::rng()() % 3 == 0) members.push_back(x);
    auto fam = UniformFamily::from_members(n, k, members);
    auto up = upper_shadow(fam, s);
    for (Mask b : oracle::k_sets(n, k + s)) {
      auto down = lower_shadow(UniformFamily::from_members(n, k + s, {b}), s);
      bool meets = std::any_of(down.members().begin(), down.members().end(), [&](Mask a) { return fam.contains(a); });
      CHECK(up.contains(b) == meets);
    }
  }
}

TEST_CASE("lex and colex segments") {
  CHECK(lex_segment(4, 2, 3).family() == uni(4, 2, {{1, 2}, {1, 3}, {1, 4}}));
  CHECK(colex_segment(4, 2, 3).family() == uni(4, 2, {{1, 2}, {1, 3}, {2, 3}}));
  for (unsigned n = 1; n <= 7; ++n)
    for (unsigned k = 1; k <= n; ++k) {
      auto star = lex_segment(n, k, binom(n - 1, k - 1).get_ui()).family();
      auto want = UniformFamily::slice(umvirate(n, 1), k);
      CHECK(star == want);
    }
  // n=6, k=3, t=2: the lex segment of size C(4,1) is exactly {A ⊇ [2]}
  auto seg = lex_segment(6, 3, 4).family();
  CHECK(seg == UniformFamily::slice(umvirate(6, mask_of({1, 2})), 3));
  CHECK_FALSE(lex_segment(6, 3, 5).family() == UniformFamily::slice(umvirate(6, mask_of({1, 2})), 3));

  for (unsigned n = 1; n <= 7; ++n)
    for (unsigned k = 0; k <= n; ++k) {
      auto order = lex_sorted(n, k);
      auto colex = oracle::k_sets(n, k);  // numeric order = colex for fixed k
      for (std::size_t m = 0; m <= order.size(); ++m) {
        auto lf = lex_segment(n, k, m).family();
        auto cf = colex_segment(n, k, m).family();
        std::vector<Mask> lw(order.begin(), order.begin() + m), cw(colex.begin(), colex.begin() + m);
        CHECK(lf == UniformFamily::from_members(n, k, lw));
        CHECK(cf == UniformFamily::from_members(n, k, cw));
      }
      for (std::size_t i = 0; i < order.size(); ++i) {
        CHECK(lex_rank(n, order[i]) == static_cast<unsigned long>(i));
        CHECK(colex_rank(colex[i]) == static_cast<unsigned long>(i));
        CHECK(lex_segment(n, k, i + 1).contains(order[i]));
        CHECK_FALSE(lex_segment(n, k, i).contains(order[i]));
        CHECK(colex_segment(n, k, i + 1).contains(colex[i]));
        CHECK_FALSE(colex_segment(n, k, i).contains(colex[i]));
      }
    }
  CHECK_THROWS(lex_segment(4, 2, 7));
  CHECK_THROWS(colex_segment(4, 5, 0));
}

TEST_CASE("Kruskal-Katona minimum") {
  CHECK(kk_min_shadow(3, 2) == 3);
  for (unsigned k = 1; k <= 5; ++k)
    for (long a = k; a <= 12; ++a) CHECK(kk_min_shadow(binom(a, k), k) == binom(a, k - 1));
  CHECK(kk_min_shadow(5, 3) == BigInt(static_cast<unsigned long>(lower_shadow(colex_segment(6, 3, 5).family()).size())));
  CHECK(kk_min_shadow(5, 3) == BigInt(static_cast<unsigned long>(brute_min_shadow(6, 3, 5, 1, false))));
  CHECK(kk_min_shadow(0, 3) == 0);
  auto c = cascade(BigInt(5), 3);  // 5 = C(4,3) + C(2,2)
  REQUIRE(c.size() == 2);
  CHECK(c[0] == std::pair<unsigned long, unsigned>{4, 3});
  CHECK(c[1] == std::pair<unsigned long, unsigned>{2, 2});
  BigInt huge = binom(200, 7) + binom(40, 5) + 3;
  BigInt sum = 0;
  for (auto [a, i] : cascade(huge, 7)) sum += binom(static_cast<long>(a), i);
  CHECK(sum == huge);
}

TEST_CASE("KK: colex attains the brute-force minimum for n <= 5") {
  for (unsigned n = 2; n <= 5; ++n)
    for (unsigned k = 1; k <= n; ++k)
      for (unsigned s = 1; s <= k; ++s) {
        unsigned total = static_cast<unsigned>(binom(n, k).get_ui());
        for (unsigned m = 0; m <= total; ++m) {
          BigInt bound = kk_min_shadow(m, k, s);
          BigInt colex(static_cast<unsigned long>(lower_shadow(colex_segment(n, k, m).family(), s).size()));
          CHECK(colex == bound);
          CHECK(BigInt(static_cast<unsigned long>(brute_min_shadow(n, k, m, s, false))) == bound);
        }
      }
}

TEST_CASE("KK upper-shadow form: lex segments attain it for n <= 6") {
  for (unsigned n = 2; n <= 6; ++n)
    for (unsigned k = 0; k < n; ++k)
      for (unsigned s = 1; k + s <= n; ++s) {
        unsigned total = static_cast<unsigned>(binom(n, k).get_ui());
        for (unsigned m = 0; m <= total; ++m) {
          BigInt bound = kk_min_upper_shadow(n, m, k, s);
          auto lex = lex_segment(n, k, m).family();
          BigInt got(static_cast<unsigned long>(m == 0 ? 0 : upper_shadow(lex, s).size()));
          CHECK(got == bound);
          if (total <= 15) CHECK(BigInt(static_cast<unsigned long>(brute_min_shadow(n, k, m, s, true))) == bound);
        }
      }
}

TEST_CASE("Katona shadow/intersection: uniform") {
  auto f = UniformFamily::slice(umvirate(5, mask_of({1, 2})), 3);
  CHECK(f.size() == 3);
  auto r = katona_check(f, 2);
  CHECK(r.status == Status::holds);
  CHECK(r.conclusion->lhs == "5/1");
  CHECK(r.conclusion->rhs == "3/1");
  CHECK_THROWS(katona_check(uni(4, 2, {{1, 2}, {3, 4}}), 1));
}

TEST_CASE("Katona: every 2-intersecting and intersecting family of [5]^(3)") {
  auto all = oracle::k_sets(5, 3);
  int two = 0, one = 0;
  for (unsigned pick = 0; pick < (1u << all.size()); ++pick) {
    std::vector<Mask> members;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (pick >> i & 1u) members.push_back(all[i]);
    auto fam = UniformFamily::from_members(5, 3, members);
    for (unsigned t = 1; t <= 2; ++t) {
      if (!oracle::t_intersecting(members, static_cast<int>(t))) continue;
      (t == 2 ? two : one)++;
      auto r = katona_check(fam, t);
      CHECK(r.status == Status::holds);
    }
  }
  CHECK(two > 10);
  CHECK(one > two);
}

TEST_CASE("Katona: biased form") {
  for (unsigned t = 1; t <= 3; ++t)
    for (Rational p : {Rational(1, 5), Rational(1, 2), Rational(4, 5)}) {
      auto r = katona_check(umvirate(5, prefix_mask(t)), t, p);
      CHECK(r.status == Status::holds);
      CHECK(mu(increasing_shadow(umvirate(5, prefix_mask(t)), t), p) == 1);
    }
  int checked = 0;
  for (unsigned n = 1; n <= 4; ++n)
    for (auto table : oracle::monotone_tables(n)) {
      SetFamily f = SetFamily::from_words(n, {table});
      for (unsigned t = 1; t <= 2; ++t) {
        if (!is_t_intersecting(f, t)) continue;
        ++checked;
        for (Rational p : {Rational(1, 7), Rational(1, 3), Rational(1, 2), Rational(3, 4)})
          CHECK(katona_check(f, t, p).status == Status::holds);
      }
    }
  CHECK(checked > 20);
  CHECK_THROWS(katona_check(or_family(3, 3), 1, Rational(1, 3)));
  CHECK_THROWS(katona_check(umvirate(3, 1).complement(), 1, Rational(1, 3)));
}

TEST_CASE("lift") {
  auto d = lift(umvirate(1, 1), 4, 2);
  CHECK(d == uni(4, 2, {{1, 2}, {1, 3}, {1, 4}}));
  CHECK(lift_count(umvirate(1, 1), 4, 2) == 3);

  for (int trial = 0; trial < 10; ++trial) {
    SetFamily f = SetFamily::from_members(3, support::random_increasing(3, 2));
    for (unsigned k = 0; k <= 7; ++k) {
      auto l = lift(f, 7, k);
      CHECK(BigInt(static_cast<unsigned long>(l.size())) == lift_count(f, 7, k));
      for (Mask a : l.members()) CHECK(f.contains(a & 7));
      for (unsigned t = 1; t <= 2; ++t)
        if (is_t_intersecting(f, t) && k > 3) CHECK(is_t_intersecting(l, t));
      if (k >= 3 && k < 7 && !l.empty()) CHECK(upper_shadow(l, 1) == lift(f, 7, k + 1));
    }
  }
  CHECK(is_t_intersecting(lift(umvirate(3, 3), 7, 4), 2));

  const unsigned long sizes[] = {10, 20, 40, 400};
  auto rows = lift_ratio_table(umvirate(1, 1), Rational(1, 2), sizes);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].k == 5);
  CHECK(rows[0].ratio == Rational(1, 2));  // C(9,4)/C(10,5)
  // majority on 3 points: the ratio moves toward mu = 1/2 from above
  auto maj = SetFamily::from_members(3, std::vector<Mask>{3, 5, 6, 7});
  auto mrows = lift_ratio_table(maj, Rational(1, 3), sizes);
  Rational target = mu(maj, Rational(1, 3));
  for (std::size_t i = 1; i < mrows.size(); ++i) {
    Rational prev = abs(mrows[i - 1].ratio - target), cur = abs(mrows[i].ratio - target);
    CHECK(cur <= prev);
  }
  CHECK_THROWS(lift(umvirate(3, 1), 3, 1));
}

TEST_CASE("Hilton") {
  auto star = UniformFamily::slice(umvirate(6, 1), 3);
  auto r = hilton_check(star, star);
  CHECK(r.status == Status::holds);
  CHECK(lex_segment(6, 3, star.size()).family() == star);

  auto a = UniformFamily::slice(or_family(5, 1), 2);  // pairs containing 1
  CHECK(a.size() == 4);
  auto pairs = oracle::k_sets(5, 2);
  std::size_t best = 0;
  for (unsigned pick = 0; pick < (1u << pairs.size()); ++pick) {
    std::vector<Mask> b;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (pick >> i & 1u) b.push_back(pairs[i]);
    if (!oracle::cross_intersecting(a.members(), b)) continue;
    best = std::max(best, b.size());
    auto rep = hilton_check(a, UniformFamily::from_members(5, 2, b), 1u);
    CHECK(rep.status == Status::holds);
  }
  CHECK(best == 4);

  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 40; ++trial) {
    unsigned k = 2 + trial % 2, l = 2 + (trial / 2) % 2;
    std::vector<Mask> x, y;
    for (Mask s : oracle::k_sets(6, k))
      if (support::rng()() % 5 == 0) x.push_back(s);
    for (Mask s : oracle::k_sets(6, l))
      if (support::rng()() % 5 == 0) y.push_back(s);
    if (!oracle::cross_intersecting(x, y)) {
      // keep only members of y meeting everything in x
      std::vector<Mask> yy;
      for (Mask s : y)
        if (std::all_of(x.begin(), x.end(), [&](Mask z) { return (z & s) != 0; })) yy.push_back(s);
      y = yy;
    }
    ++checked;
    auto rep = hilton_check(UniformFamily::from_members(6, k, x), UniformFamily::from_members(6, l, y));
    CHECK(rep.status == Status::holds);
  }
  CHECK_THROWS(hilton_check(uni(4, 2, {{1, 2}}), uni(4, 2, {{3, 4}})));
}

TEST_CASE("union bound") {
  // {A : |A ∩ [4]| >= 3} is 2-intersecting
  SetFamily f = SetFamily::from_predicate(7, [](Mask x) { return popcount(x & 15) >= 3; });
  REQUIRE(is_t_intersecting(f, 2));
  auto r = union_bound_check(f, 2, mask_of({1, 2}), 4, 4, 1);
  CHECK(r.status == Status::holds);
  for (unsigned l = 2; l <= 5; ++l)
    for (unsigned rr = 0; rr <= 3; ++rr) {
      auto rep = union_bound_check(f, 2, mask_of({1, 2}), 4, l, rr);
      CHECK(rep.status != Status::violated);
    }
  CHECK(union_bound_check(or_family(5, 3), 2, 3, 3, 3, 1).status == Status::hypothesis_not_met);
}
