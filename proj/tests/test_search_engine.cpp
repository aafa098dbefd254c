#include <filesystem>
#include <set>

#include "doctest.h"
#include "ekrlab/search.hpp"
#include "ekrlab/zoo.hpp"
#include "oracle.hpp"

using namespace ekrlab;

namespace {

SearchProblem uniform_problem(unsigned n, unsigned k, Predicate pred, unsigned param) {
  SearchProblem pr;
  pr.n = n;
  pr.k = k;
  pr.predicate = pred;
  pr.param = param;
  return pr;
}

// Truth tables of increasing families on [n], n <= 4, by brute force over all 2^(2^n) tables.
std::uint64_t brute_monotone(unsigned n) {
  const unsigned sz = 1u << n;
  std::uint64_t c = 0;
  for (std::uint64_t tab = 0; tab < (std::uint64_t{1} << sz); ++tab) {
    bool ok = true;
    for (unsigned x = 0; x < sz && ok; ++x)
      if (tab >> x & 1u)
        for (unsigned i = 0; i < n; ++i)
          if (!(tab >> (x | (1u << i)) & 1u)) ok = false;
    c += ok;
  }
  return c;
}

// Exhaustive maximum over all subfamilies of the candidate list (<= 21 sets).
std::size_t brute_max(unsigned n, unsigned k, Predicate pred, unsigned param) {
  auto c = oracle::k_sets(n, k);
  std::size_t best = 0;
  for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << c.size()); ++sub) {
    const auto sz = static_cast<std::size_t>(__builtin_popcountll(sub));
    if (sz <= best) continue;
    std::vector<Mask> f;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (sub >> i & 1u) f.push_back(c[i]);
    if (satisfies(pred, param, f)) best = sz;
  }
  return best;
}

}  // namespace

TEST_CASE("monotone enumeration counts") {
  CHECK(count_monotone(3) == 20);
  CHECK(count_monotone(4) == 168);
  CHECK(count_monotone(5) == 7581);
  for (unsigned n = 0; n <= 4; ++n) CHECK(count_monotone(n) == brute_monotone(n));
  for (unsigned n = 0; n <= 5; ++n) {
    std::set<std::vector<Mask>> seen;
    std::uint64_t cnt = 0;
    enumerate_monotone(n, [&](const SetFamily& f) {
      ++cnt;
      CHECK(f.is_increasing());
      seen.insert(f.members());
    });
    CHECK(cnt == oracle::monotone_count(n));
    CHECK(seen.size() == cnt);
  }
  CHECK_THROWS(enumerate_monotone(7, [](const SetFamily&) {}));
}

TEST_CASE("monotone enumeration at n = 6" * doctest::timeout(60)) {
  std::uint64_t cnt = 0, inc = 0;
  enumerate_monotone(6, [&](const SetFamily& f) {
    ++cnt;
    if ((cnt & 0xffff) == 0) inc += f.is_increasing();
  });
  CHECK(cnt == 7828354);
  CHECK(cnt == oracle::monotone_count(6));
  CHECK(inc == cnt / 0x10000);
}

TEST_CASE("exact extremal values") {
  // EKR
  auto ekr = max_uniform(uniform_problem(5, 2, Predicate::intersecting, 1));
  CHECK(ekr.value == 4);
  CHECK(ekr.complete);
  CHECK(ekr.verified);
  // The canonical optimum is the star at 1.
  CHECK(ekr.witness == std::vector<Mask>{3, 5, 9, 17});
  // Wilson at n = (t+1)(k-t+1)
  auto w = max_uniform(uniform_problem(6, 3, Predicate::t_intersecting, 2));
  CHECK(w.value == 4);
  CHECK(w.verified);
  // Frankl matching
  SearchOptions sh;
  sh.shifted = true;
  auto fm = max_uniform(uniform_problem(9, 2, Predicate::matching_at_most, 2), sh);
  CHECK(fm.value == 15);
  CHECK(fm.verified);
  CHECK(fm.complete);
  CHECK(fm.witness == construct(FamilySpec{"or_family", {{"n", 9}, {"t", 2}, {"k", 2}}, {}}).uniform->members());
}

TEST_CASE("branch and bound agrees with brute force") {
  for (unsigned n = 3; n <= 7; ++n)
    for (unsigned k = 1; k <= n; ++k) {
      if (binom(n, k) > 16) continue;
      for (auto [pred, param] : std::vector<std::pair<Predicate, unsigned>>{
               {Predicate::intersecting, 1}, {Predicate::t_intersecting, 2}, {Predicate::matching_at_most, 1}, {Predicate::matching_at_most, 2}}) {
        const auto expect = brute_max(n, k, pred, param);
        auto pr = uniform_problem(n, k, pred, param);
        auto plain = max_uniform(pr);
        CHECK_MESSAGE(plain.value == expect, n << " " << k << " " << predicate_name(pred) << param);
        CHECK(plain.verified);
        SearchOptions sh;
        sh.shifted = true;
        auto shifted = max_uniform(pr, sh);
        CHECK(shifted.value == expect);
        CHECK(shifted.verified);
      }
    }
}

TEST_CASE("shifted and plain modes agree on EKR and Wilson instances") {
  for (unsigned n = 4; n <= 9; ++n)
    for (unsigned k = 2; 2 * k < n + 1; ++k) {
      if (binom(n, k) > 20) continue;
      for (unsigned t = 1; t <= 2; ++t) {
        auto pr = uniform_problem(n, k, t == 1 ? Predicate::intersecting : Predicate::t_intersecting, t);
        SearchOptions sh;
        sh.shifted = true;
        auto a = max_uniform(pr), b = max_uniform(pr, sh);
        CHECK(a.complete);
        CHECK(b.complete);
        CHECK(a.value == b.value);
        CHECK(a.verified);
        CHECK(b.verified);
      }
    }
}

TEST_CASE("thread count does not change the certificate") {
  for (auto pr : {uniform_problem(7, 3, Predicate::t_intersecting, 2), uniform_problem(6, 3, Predicate::intersecting, 1),
                  uniform_problem(7, 2, Predicate::matching_at_most, 2)}) {
    auto one = max_uniform(pr);
    for (unsigned th : {2u, 3u}) {
      SearchOptions o;
      o.threads = th;
      auto many = max_uniform(pr, o);
      CHECK(many.to_json().dump() == one.to_json().dump());
    }
    SearchOptions split;
    split.split_depth = 5;
    CHECK(max_uniform(pr, split).to_json().dump() == one.to_json().dump());
  }
}

TEST_CASE("mu_p objective over the whole cube") {
  SearchProblem pr;
  pr.n = 4;
  pr.predicate = Predicate::intersecting;
  pr.objective = Objective::mu_p;
  pr.p = Rational(1, 3);
  auto c = max_uniform(pr);
  CHECK(c.value == Rational(1, 3));  // biased EKR
  CHECK(c.verified);
  pr.predicate = Predicate::t_intersecting;
  pr.param = 2;
  pr.p = Rational(1, 4);
  CHECK(max_uniform(pr).value == Rational(1, 16));  // biased Wilson, p <= 1/(t+1)
}

TEST_CASE("budget exhaustion and checkpoints") {
  auto pr = uniform_problem(7, 3, Predicate::intersecting, 1);
  pr.node_limit = 50;
  auto cut = max_uniform(pr);
  CHECK_FALSE(cut.complete);
  CHECK(cut.verified);  // best found still satisfies the predicate
  CHECK(cut.value <= 15);

  const auto path = (std::filesystem::temp_directory_path() / "ekrlab_ckpt_test.json").string();
  std::filesystem::remove(path);
  auto full = uniform_problem(7, 3, Predicate::t_intersecting, 2);
  SearchOptions o;
  o.checkpoint_path = path;
  o.split_depth = 6;
  auto first = max_uniform(full, o);
  CHECK(first.complete);
  CHECK(std::filesystem::exists(path));
  o.resume = true;
  auto again = max_uniform(full, o);
  CHECK(again.stats.tasks_resumed == again.stats.tasks);
  CHECK(again.to_json().dump() == first.to_json().dump());

  // A mismatched problem refuses the checkpoint.
  auto other = uniform_problem(7, 3, Predicate::intersecting, 1);
  CHECK_THROWS(max_uniform(other, o));
  std::filesystem::remove(path);

  // An interrupted run resumes to the same answer.
  auto limited = full;
  limited.node_limit = 1;
  SearchOptions o2;
  o2.checkpoint_path = path;
  o2.split_depth = 6;
  auto part = max_uniform(limited, o2);
  CHECK_FALSE(part.complete);
  o2.resume = true;
  auto rest = max_uniform(full, o2);  // problem differs only by the budget
  CHECK(rest.complete);
  CHECK(rest.value == first.value);
  CHECK(rest.witness == first.witness);
  std::filesystem::remove(path);
}

TEST_CASE("maximal family enumeration") {
  // Maximal intersecting families in [5]^(2): 5 stars and 10 triangles.
  std::vector<std::vector<Mask>> fams;
  auto r = enumerate_maximal(5, 2, Predicate::intersecting, 1, 0, [&](const std::vector<Mask>& f) { fams.push_back(f); });
  CHECK(r.complete);
  CHECK(fams.size() == 15);
  for (auto& f : fams) CHECK(is_t_intersecting(f, 1));
  std::size_t big = 0;
  enumerate_maximal(5, 2, Predicate::intersecting, 1, 4, [&](const std::vector<Mask>&) { ++big; });
  CHECK(big == 5);

  // Maximal graphs on 5 vertices with matching number <= 1: stars and triangles again.
  std::size_t m1 = 0;
  enumerate_maximal(5, 2, Predicate::matching_at_most, 1, 0, [&](const std::vector<Mask>& f) {
    ++m1;
    CHECK(matching_number(std::span<const Mask>(f)) == 1);
  });
  CHECK(m1 == 15);

  // Brute-force cross-check of maximality counts on [6]^(2), matching <= 2.
  auto c = oracle::k_sets(6, 2);
  std::size_t brute = 0;
  for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << c.size()); ++sub) {
    std::vector<Mask> f;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (sub >> i & 1u) f.push_back(c[i]);
    if (oracle::matching_number(f) > 2) continue;
    bool maximal = true;
    for (std::size_t i = 0; i < c.size() && maximal; ++i) {
      if (sub >> i & 1u) continue;
      auto g = f;
      g.push_back(c[i]);
      if (oracle::matching_number(g) <= 2) maximal = false;
    }
    brute += maximal;
  }
  std::size_t lib = 0;
  enumerate_maximal(6, 2, Predicate::matching_at_most, 2, 0, [&](const std::vector<Mask>&) { ++lib; });
  CHECK(lib == brute);
}

TEST_CASE("measure-capped extremal problem") {
  auto a = extremal_under_measure_cap(4, Rational(1, 2), 1, Rational(1, 4));
  CHECK(a.value == Rational(1, 4));
  REQUIRE(a.witness);
  CHECK(*a.witness == umvirate(4, 1));

  auto b = extremal_under_measure_cap(4, Rational(1, 2), 1, Rational(1, 4), Rational(0));
  CHECK(b.value < Rational(1, 4));
  REQUIRE(b.witness);
  // 3p^2 - 2p^3 at p = 1/4, shared by G̃_3 and G̃_4
  CHECK(b.value == Rational(5, 32));
  auto g3 = *construct(FamilySpec{"tilde_Gi", {{"n", 4}, {"i", 3}}, {}}).dense;
  CHECK(*b.witness == g3);

  auto c = extremal_under_measure_cap(5, Rational(1, 3), 2, Rational(1, 6));
  CHECK(c.value == Rational(1, 36));
  CHECK(*c.witness == umvirate(5, 3));
}
