#include <random>
#include <vector>

#include "doctest.h"
#include "ekrlab/kernels.hpp"

using namespace ekrlab::kernels;

namespace {

std::vector<Word> random_words(std::size_t n, std::mt19937_64& g) {
  std::vector<Word> v(n);
  for (auto& w : v) w = g();
  return v;
}

// Word counts that exercise both the vector body and the scalar tail.
const std::size_t kSizes[] = {1, 2, 4, 8, 16, 64, 256};

unsigned coords_for(std::size_t words) {
  unsigned c = 6;
  while ((std::size_t{1} << (c - 6)) < words) ++c;
  return c;
}

}  // namespace

TEST_CASE("mask tables match their definitions") {
  for (unsigned c = 0; c < 6; ++c) {
    Word expect = 0;
    for (unsigned x = 0; x < 64; ++x)
      if (!((x >> c) & 1u)) expect |= Word{1} << x;
    CHECK(kLowHalf[c] == expect);
  }
  for (unsigned r = 0; r < 7; ++r) {
    Word expect = 0;
    for (unsigned x = 0; x < 64; ++x)
      if (static_cast<unsigned>(__builtin_popcount(x)) == r) expect |= Word{1} << x;
    CHECK(kLevel[r] == expect);
  }
}

TEST_CASE("scalar weight profile counts positions by popcount") {
  std::mt19937_64 g(7);
  auto w = random_words(16, g);
  std::vector<std::uint64_t> counts(11, 0), expect(11, 0);
  scalar().weight_profile(w.data(), w.size(), counts.data());
  for (std::size_t i = 0; i < w.size(); ++i)
    for (unsigned b = 0; b < 64; ++b)
      if ((w[i] >> b) & 1u) ++expect[__builtin_popcountll((i << 6) | b)];
  CHECK(counts == expect);
}

TEST_CASE("scalar up/down passes agree with the pointwise definition") {
  std::mt19937_64 g(11);
  auto w = random_words(4, g);  // n = 8
  for (unsigned c = 0; c < 8; ++c) {
    auto up = w, down = w;
    scalar().up_pass(up.data(), up.size(), c);
    scalar().down_pass(down.data(), down.size(), c);
    auto get = [&](const std::vector<Word>& v, unsigned x) { return (v[x >> 6] >> (x & 63)) & 1u; };
    for (unsigned x = 0; x < 256; ++x) {
      unsigned other = x ^ (1u << c);
      bool has_c = (x >> c) & 1u;
      CHECK(get(up, x) == (get(w, x) | (has_c ? get(w, other) : 0)));
      CHECK(get(down, x) == (get(w, x) | (has_c ? 0 : get(w, other))));
    }
  }
}

TEST_CASE("avx2 kernels are equivalent to the scalar reference") {
  const Table* v = avx2();
  if (v == nullptr) {
    MESSAGE("AVX2 path unavailable on this machine; equivalence not exercised");
    return;
  }
  const Table& s = scalar();
  std::mt19937_64 g(42);
  for (std::size_t n : kSizes) {
    CAPTURE(n);
    auto a = random_words(n, g), b = random_words(n, g);
    for (auto op : {&Table::bit_or, &Table::bit_and, &Table::bit_andnot, &Table::bit_xor}) {
      auto x = a, y = a;
      (s.*op)(x.data(), b.data(), n);
      (v->*op)(y.data(), b.data(), n);
      CHECK(x == y);
    }
    CHECK(s.popcount(a.data(), n) == v->popcount(a.data(), n));
    CHECK(s.and_popcount(a.data(), b.data(), n) == v->and_popcount(a.data(), b.data(), n));
    for (unsigned c = 0; c < coords_for(n); ++c) {
      CAPTURE(c);
      auto x = a, y = a;
      s.up_pass(x.data(), n, c);
      v->up_pass(y.data(), n, c);
      CHECK(x == y);
      x = a, y = a;
      s.down_pass(x.data(), n, c);
      v->down_pass(y.data(), n, c);
      CHECK(x == y);
      std::vector<Word> px(n), py(n);
      s.pivot(px.data(), a.data(), n, c);
      v->pivot(py.data(), a.data(), n, c);
      CHECK(px == py);
    }
    std::vector<std::uint64_t> cs(20, 0), cv(20, 0);
    s.weight_profile(a.data(), n, cs.data());
    v->weight_profile(a.data(), n, cv.data());
    CHECK(cs == cv);
  }
}

TEST_CASE("sparse inputs take the same path in both variants") {
  const Table* v = avx2();
  if (v == nullptr) return;
  std::vector<Word> a(64, 0);
  a[5] = 1, a[63] = Word{1} << 63;
  std::vector<std::uint64_t> cs(20, 0), cv(20, 0);
  scalar().weight_profile(a.data(), a.size(), cs.data());
  v->weight_profile(a.data(), a.size(), cv.data());
  CHECK(cs == cv);
  CHECK(cs[2] == 1);
  CHECK(cs[12] == 1);
}
