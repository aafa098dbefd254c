#include "doctest.h"
#include "ekrlab/measure.hpp"
#include "oracle.hpp"

using namespace ekrlab;

namespace {

SetFamily from(unsigned n, std::vector<std::vector<int>> sets) {
  std::vector<Mask> m;
  for (auto& s : sets) m.push_back(mask_of(s));
  return SetFamily::from_members(n, m);
}

SetFamily majority3() { return from(3, {{1, 2}, {1, 3}, {2, 3}, {1, 2, 3}}); }

std::vector<SetFamily> monotone(unsigned n) {
  std::vector<SetFamily> out;
  for (auto t : oracle::monotone_tables(n)) out.push_back(SetFamily::from_words(n, {t}));
  return out;
}

SetFamily random_family(unsigned n, double density = 0.3) {
  return SetFamily::from_members(n, support::random_members(n, density));
}

Rational R(long a, long b = 1) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}

// mu_p(F Δ S_B) minimized over all B by brute force, lex-least on ties.
std::pair<Mask, Rational> brute_subcube(const SetFamily& f, const Rational& p) {
  const unsigned n = f.n();
  auto fm = f.members();
  Mask best_b = 0;
  Rational best = -1;
  for (Mask b : oracle::all_subsets(n)) {
    std::vector<Mask> diff;
    for (Mask x : oracle::all_subsets(n))
      if (f.contains(x) != ((x & b) == b)) diff.push_back(x);
    Rational d = oracle::mu(diff, n, p);
    if (best < 0 || d < best || (d == best && lex_less(b, best_b))) {
      best = d;
      best_b = b;
    }
  }
  return {best_b, best};
}

}  // namespace

TEST_CASE("mu examples") {
  for (Rational p : {R(0), R(1, 3), R(1, 2), R(5, 7), R(1)}) {
    CHECK(mu(umvirate(4, mask_of({2})), p) == p);
    CHECK(mu(umvirate(5, mask_of({1, 3, 4})), p) == p * p * p);
  }
  CHECK(mu(majority3(), R(1, 4)) == R(5, 32));
  CHECK(mu(SetFamily(3), R(1, 2)) == 0);
  CHECK_THROWS(mu(majority3(), R(3, 2)));
}

TEST_CASE("mu_polynomial examples") {
  CHECK(mu_polynomial(umvirate(3, 1)).coefficients() == std::vector<Rational>{0, 1});
  CHECK(mu_polynomial(majority3()).coefficients() == std::vector<Rational>{0, 0, 3, -2});
  CHECK(mu_polynomial(majority3()).str() == "3p^2 - 2p^3");
  CHECK(mu_polynomial(SetFamily(4)).degree() == -1);
  CHECK(mu_polynomial(SetFamily(4)).str() == "0");
  // coefficients sum to mu_1 = [ [n] in F ]
  CHECK(mu_polynomial(majority3())(R(1)) == 1);
  CHECK(mu_polynomial(from(3, {{1}, {2}}))(R(1)) == 0);
}

TEST_CASE("mu_polynomial agrees with enumeration at random points") {
  for (int trial = 0; trial < 40; ++trial) {
    unsigned n = 1 + trial % 7;
    SetFamily f = random_family(n, 0.4);
    auto poly = mu_polynomial(f);
    CHECK(poly.degree() <= static_cast<int>(n));
    auto members = f.members();
    for (int k = 0; k < 5; ++k) {
      Rational p = support::random_p();
      CHECK(poly(p) == mu(f, p));
      CHECK(mu(f, p) == oracle::mu(members, n, p));
    }
  }
}

TEST_CASE("complement, bar and dual measure identities") {
  for (int trial = 0; trial < 30; ++trial) {
    unsigned n = 1 + trial % 6;
    SetFamily f = random_family(n, 0.5);
    Rational p = support::random_p();
    CHECK(mu(f, p) + mu(f.complement(), p) == 1);
    CHECK(mu(bar(f), p) == mu(f, 1 - p));
    CHECK(mu(dual(f), p) == 1 - mu(f, 1 - p));
  }
}

TEST_CASE("edge boundary examples") {
  for (unsigned t = 0; t <= 4; ++t) {
    auto eb = edge_boundary(umvirate(4, prefix_mask(t)));
    CHECK(eb.count == (std::uint64_t{1} << (4 - t)) * t);
    REQUIRE(eb.iso);
    CHECK(eb.iso->holds);
    CHECK(eb.iso->equality);
    CHECK(eb.subcube);
  }
  auto dict = edge_boundary(umvirate(3, 1), true);
  CHECK(dict.count == 4);
  REQUIRE(dict.edges.size() == 4);
  for (auto& e : dict.edges) {
    CHECK(e.coord == 1);
    CHECK((e.lower & 1) == 0);
  }
  CHECK_FALSE(edge_boundary(SetFamily(3)).iso);
}

TEST_CASE("edge isoperimetry: strict exactly off subcubes, all 256 subsets of Q_3") {
  int subcubes = 0;
  for (Word t = 1; t < 256; ++t) {
    SetFamily a = SetFamily::from_words(3, {t});
    auto eb = edge_boundary(a);
    CHECK(eb.count == oracle::boundary_edges(a.members(), 3));
    REQUIRE(eb.iso);
    CHECK(eb.iso->holds);
    CHECK(eb.iso->equality == eb.subcube);
    subcubes += eb.subcube;
  }
  CHECK(subcubes == 27);  // 3^3 subcubes
}

TEST_CASE("influence examples") {
  for (unsigned t = 1; t <= 4; ++t)
    for (Rational p : {R(1, 3), R(1, 2), R(4, 5)}) CHECK(influence(umvirate(5, prefix_mask(t)), p).total == t * pow(p, t - 1));
  auto maj = influence(majority3(), R(1, 2));
  CHECK(maj.total == R(3, 2));
  for (auto& v : maj.per_coordinate) CHECK(v == R(1, 2));
  for (auto& v : influence(SetFamily::full(4), R(1, 3)).per_coordinate) CHECK(v == 0);
  CHECK(influence(SetFamily(4), R(1, 3)).total == 0);
  CHECK_THROWS(influence(majority3(), R(0)));
}

TEST_CASE("influence matches pivotal-set enumeration") {
  for (int trial = 0; trial < 30; ++trial) {
    unsigned n = 1 + trial % 7;
    SetFamily f = trial % 2 ? random_family(n) : SetFamily::from_members(n, support::random_increasing(n, 3));
    auto members = f.members();
    Rational p = support::random_p();
    auto iv = influence(f, p);
    auto polys = influence_polynomials(f);
    Rational sum = 0;
    for (unsigned i = 0; i < n; ++i) {
      CHECK(iv.per_coordinate[i] == oracle::influence(members, n, i, p));
      CHECK(polys.per_coordinate[i](p) == iv.per_coordinate[i]);
      CHECK(iv.per_coordinate[i] >= 0);
      CHECK(iv.per_coordinate[i] <= 1);
      sum += iv.per_coordinate[i];
    }
    CHECK(sum == iv.total);
    CHECK(polys.total(p) == iv.total);
    // |∂F| = 2^(n-1) I_{1/2}
    CHECK(Rational(static_cast<long>(edge_boundary(f).count)) == Rational(1L << (n - 1)) * influence(f, R(1, 2)).total);
  }
}

TEST_CASE("Russo identity") {
  CHECK(russo_identity(umvirate(3, 1)).holds);
  CHECK(russo_identity(umvirate(3, 1)).total_influence.coefficients() == std::vector<Rational>{1});
  auto maj = russo_identity(majority3());
  CHECK(maj.holds);
  CHECK(maj.derivative.coefficients() == std::vector<Rational>{0, 6, -6});
  auto fams = monotone(4);
  CHECK(fams.size() == 168);
  for (auto& f : fams) CHECK(russo_identity(f).holds);
  CHECK_THROWS(russo_identity(umvirate(2, 1).complement()));
}

TEST_CASE("iso_slack examples") {
  auto s = iso_slack(umvirate(3, mask_of({1, 2})), R(1, 3));
  CHECK(s.status == IsoStatus::checked);
  CHECK(s.equality);
  CHECK(s.consistent);
  CHECK(R(1, 3) * s.total_influence == R(2, 9));

  auto m = iso_slack(majority3(), R(1, 2));
  REQUIRE(m.check);
  CHECK(m.check->holds);
  CHECK_FALSE(m.equality);
  CHECK(std::abs(std::stod(m.check->slack) - 0.25) < 1e-15);

  SetFamily anti = umvirate(3, 1).complement();
  CHECK(iso_slack(anti, R(2, 3)).status == IsoStatus::skipped);
  auto half = iso_slack(anti, R(1, 2));
  CHECK(half.status == IsoStatus::checked);
  CHECK(half.equality);  // a subcube, measure-preserving reflection at p = 1/2
  CHECK(half.consistent);
  auto low = iso_slack(anti, R(1, 3));
  CHECK(low.check->holds);
  CHECK_FALSE(low.equality);

  CHECK(iso_slack(SetFamily(3), R(1, 3)).status == IsoStatus::vacuous);
  CHECK(iso_slack(SetFamily::full(3), R(1, 3)).status == IsoStatus::vacuous);
}

TEST_CASE("iso_slack sweep: monotone n <= 4 and arbitrary n = 3") {
  const Rational grid[] = {R(1, 8), R(1, 4), R(1, 2), R(3, 4)};
  for (unsigned n = 1; n <= 4; ++n)
    for (auto& f : monotone(n))
      for (auto& p : grid) {
        auto s = iso_slack(f, p);
        if (s.status == IsoStatus::vacuous) continue;
        REQUIRE(s.check);
        CHECK(s.check->holds);
        CHECK(s.consistent);
      }
  for (Word t = 1; t < 255; ++t) {
    SetFamily f = SetFamily::from_words(3, {t});
    for (Rational p : {R(1, 5), R(1, 2)}) {
      auto s = iso_slack(f, p);
      REQUIRE(s.status == IsoStatus::checked);
      CHECK(s.check->holds);
      CHECK(s.consistent);
    }
  }
}

TEST_CASE("log-measure profile") {
  const std::vector<Rational> grid = {R(1, 10), R(1, 4), R(1, 2), R(2, 3), R(9, 10)};
  auto cube = log_measure_profile(umvirate(4, mask_of({1, 3})), grid);
  CHECK(cube.non_increasing);
  CHECK_FALSE(cube.strictly_decreasing_somewhere);
  CHECK(cube.consistent);
  for (auto& [p, v] : cube.points) CHECK(std::abs(v.to_double() - 2.0) < 1e-15);

  const std::vector<Rational> two = {R(1, 4), R(1, 2)};
  auto maj = log_measure_profile(majority3(), two);
  CHECK(maj.strictly_decreasing_somewhere);
  CHECK(maj.non_increasing);

  auto orf = log_measure_profile(or_family(4, mask_of({1, 2})), grid);
  CHECK(orf.strictly_decreasing_somewhere);
  CHECK(orf.non_increasing);
  CHECK(orf.consistent);

  CHECK_THROWS(log_measure_profile(SetFamily(3), two));
  CHECK_THROWS(log_measure_profile(SetFamily::full(3), two));
  CHECK_THROWS(log_measure_profile(majority3(), std::vector<Rational>{R(1, 2), R(1, 4)}));

  for (unsigned n = 1; n <= 4; ++n)
    for (auto& f : monotone(n)) {
      if (f.empty() || f.size() == (1u << n)) continue;
      auto prof = log_measure_profile(f, grid);
      CHECK(prof.non_increasing);
      CHECK(prof.consistent);
    }
}

TEST_CASE("measure transfer: corollary sweep over monotone n = 4") {
  TransferMode mode;  // umvirate, t = 1
  int hyp = 0;
  for (auto& f : monotone(4)) {
    auto r = measure_transfer_check(f, R(1, 2), R(1, 4), mode);
    CHECK(r.status != Status::violated);
    CHECK(r.status != Status::unresolved);
    hyp += r.status == Status::holds;
    if (mu(f, R(1, 2)) <= R(1, 2)) CHECK(mu(f, R(1, 4)) <= R(1, 4));
  }
  CHECK(hyp > 0);
}

TEST_CASE("measure transfer examples") {
  TransferMode two{TransferMode::umvirate, 2, 1};
  auto eq = measure_transfer_check(umvirate(5, mask_of({2, 4})), R(2, 3), R(1, 5), two);
  CHECK(eq.status == Status::holds);
  REQUIRE(eq.conclusion);
  CHECK(eq.conclusion->equality);
  REQUIRE(eq.witness);
  CHECK(*eq.witness == mask_of({2, 4}));

  auto maj = measure_transfer_check(majority3(), R(1, 2), R(1, 4), TransferMode{});
  CHECK(maj.status == Status::holds);
  CHECK_FALSE(maj.conclusion->equality);
  CHECK(maj.values[1].second == "5/32");

  TransferMode orm{TransferMode::or_form, 2, 1};
  auto o = measure_transfer_check(or_family(4, mask_of({1, 4})), R(3, 5), R(1, 3), orm);
  CHECK(o.status == Status::holds);
  CHECK(o.conclusion->equality);
  CHECK(o.witness_kind == "or");

  // real exponent goes through the high-precision path
  TransferMode frac{TransferMode::umvirate, R(3, 2), 1};
  auto fr = measure_transfer_check(umvirate(4, mask_of({1, 2})), R(1, 2), R(1, 3), frac);
  CHECK(fr.status == Status::holds);
  CHECK(fr.conclusion->bits > 0);

  TransferMode lex{TransferMode::lex, 1, 2};
  auto lx = measure_transfer_check(from(3, {{1, 2}, {1, 3}, {1, 2, 3}}), R(1, 2), R(1, 4), lex);
  CHECK(lx.status == Status::holds);
  CHECK(lx.conclusion->equality);

  CHECK(measure_transfer_check(majority3(), R(1, 4), R(1, 2), TransferMode{}).status == Status::hypothesis_not_met);
  CHECK(measure_transfer_check(SetFamily::full(2), R(1, 2), R(1, 4), TransferMode{}).status ==
        Status::hypothesis_not_met);
}

TEST_CASE("cross-intersecting measure bound") {
  auto d = cross_measure_bound(umvirate(3, 1), umvirate(3, 1), R(1, 3));
  CHECK(d.status == Status::holds);
  CHECK(d.conclusion->equality);

  auto s2 = cross_measure_bound(umvirate(3, 3), umvirate(3, 3), R(1, 3));
  CHECK(s2.status == Status::holds);
  CHECK(s2.conclusion->lhs == "1/9");
  // (8/9)^(log_{2/3}(1/3)) = 0.748...
  CHECK(std::abs(std::stod(s2.conclusion->rhs) - std::pow(8.0 / 9.0, std::log(1.0 / 3) / std::log(2.0 / 3))) < 1e-12);

  CHECK_THROWS(cross_measure_bound(umvirate(3, 1), umvirate(3, 2), R(1, 3)));
  CHECK(cross_measure_bound(umvirate(3, 1), umvirate(3, 1), R(2, 3)).status == Status::hypothesis_not_met);

  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 60; ++trial) {
    auto f = support::random_increasing(5, 2);
    auto g = support::random_increasing(5, 2);
    if (!oracle::cross_intersecting(f, g)) continue;
    ++checked;
    Rational p = support::random_p();
    if (p > R(1, 2)) p = 1 - p;
    auto r = cross_measure_bound(SetFamily::from_members(5, f), SetFamily::from_members(5, g), p);
    CHECK(r.status == Status::holds);
  }
  CHECK(checked >= 20);
}

TEST_CASE("lex order on sets") {
  CHECK(lex_less(mask_of({1, 2}), mask_of({1, 3})));
  CHECK(lex_less(mask_of({1, 3}), mask_of({2})));
  CHECK(lex_less(mask_of({1}), mask_of({1, 2})));
  CHECK(lex_less(0, mask_of({1})));
  CHECK_FALSE(lex_less(mask_of({2}), mask_of({1, 5})));
  CHECK_FALSE(lex_less(mask_of({1, 2}), mask_of({1, 2})));
}

TEST_CASE("subcube distance") {
  auto s = subcube_distance(umvirate(4, mask_of({1, 2})), R(1, 3));
  CHECK(s.b == mask_of({1, 2}));
  CHECK(s.distance == 0);

  // Brute force over all 8 candidates: {1,2} wins with 3/32 ({1} gives 3/16).
  auto maj = subcube_distance(majority3(), R(1, 4));
  CHECK(maj.b == mask_of({1, 2}));
  CHECK(maj.distance == R(3, 32));
  CHECK(mu(majority3() ^ umvirate(3, 1), R(1, 4)) == R(3, 16));

  auto e = subcube_distance(SetFamily(5), R(2, 7));
  CHECK(e.b == prefix_mask(5));
  CHECK(e.distance == pow(R(2, 7), 5));

  for (int trial = 0; trial < 25; ++trial) {
    unsigned n = 1 + trial % 5;
    SetFamily f = trial % 2 ? random_family(n, 0.5) : SetFamily::from_members(n, support::random_increasing(n, 2));
    Rational p = support::random_p();
    auto got = subcube_distance(f, p);
    auto want = brute_subcube(f, p);
    CHECK(got.b == want.first);
    CHECK(got.distance == want.second);
  }
}

TEST_CASE("subcube distance above the exhaustive limit") {
  SetFamily f = umvirate(21, mask_of({1, 2}));
  auto one = subcube_distance(f, R(1, 2), 1);
  CHECK(one.b == mask_of({1}));
  CHECK(one.distance == R(1, 4));
}
