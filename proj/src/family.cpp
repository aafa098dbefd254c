#include "ekrlab/family.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace ekrlab {

namespace {

const kernels::Table& K() { return kernels::active(); }

std::size_t word_count(unsigned n) { return n < 6 ? 1 : std::size_t{1} << (n - 6); }

Word padding_mask(unsigned n) {
  if (n >= 6) return ~Word{0};
  unsigned bits = 1u << n;
  return bits == 64 ? ~Word{0} : (Word{1} << bits) - 1;
}

// Truth table of {x : coordinate c (0-indexed) not in x}, applied in place as
// an AND mask.
void keep_without(std::vector<Word>& w, unsigned c) {
  if (c < 6) {
    for (auto& x : w) x &= kernels::kLowHalf[c];
    return;
  }
  const std::size_t bit = std::size_t{1} << (c - 6);
  for (std::size_t i = 0; i < w.size(); ++i)
    if (i & bit) w[i] = 0;
}

void keep_with(std::vector<Word>& w, unsigned c) {
  if (c < 6) {
    for (auto& x : w) x &= ~kernels::kLowHalf[c];
    return;
  }
  const std::size_t bit = std::size_t{1} << (c - 6);
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!(i & bit)) w[i] = 0;
}

}  // namespace

Mask mask_of(std::span<const int> elements) {
  Mask m = 0;
  for (int e : elements) {
    if (e < 1 || e > 64) throw std::invalid_argument("element " + std::to_string(e) + " out of range");
    m |= Mask{1} << (e - 1);
  }
  return m;
}

Mask mask_of(std::initializer_list<int> elements) { return mask_of(std::span<const int>(elements.begin(), elements.size())); }

std::vector<int> elements_of(Mask m) {
  std::vector<int> out;
  while (m != 0) {
    out.push_back(__builtin_ctzll(m) + 1);
    m &= m - 1;
  }
  return out;
}

std::string set_string(Mask m) {
  std::string s = "{";
  bool first = true;
  for (int e : elements_of(m)) {
    if (!first) s += ',';
    s += std::to_string(e);
    first = false;
  }
  return s + "}";
}

// ---------------------------------------------------------------- SetFamily

SetFamily::SetFamily(unsigned n) : n_(n) {
  if (n > kMaxDenseN) throw std::invalid_argument("dense families need n <= 30, got " + std::to_string(n));
  words_.assign(word_count(n), 0);
}

SetFamily SetFamily::full(unsigned n) {
  SetFamily f(n);
  std::fill(f.words_.begin(), f.words_.end(), ~Word{0});
  f.clear_padding();
  return f;
}

SetFamily SetFamily::from_members(unsigned n, std::span<const Mask> members) {
  SetFamily f(n);
  for (Mask m : members) {
    if (m > f.universe()) throw std::invalid_argument("member " + set_string(m) + " outside [" + std::to_string(n) + "]");
    f.insert(m);
  }
  return f;
}

SetFamily SetFamily::from_words(unsigned n, std::vector<Word> words) {
  SetFamily f(n);
  if (words.size() != f.words_.size()) throw std::invalid_argument("truth table has the wrong length");
  if (n < 6 && (words[0] & ~padding_mask(n)) != 0) throw std::invalid_argument("truth table has bits beyond 2^n");
  f.words_ = std::move(words);
  return f;
}

std::uint64_t SetFamily::size() const { return K().popcount(words_.data(), words_.size()); }

bool SetFamily::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
}

std::vector<Mask> SetFamily::members() const {
  std::vector<Mask> out;
  out.reserve(size());
  for_each([&](Mask m) { out.push_back(m); });
  return out;
}

std::vector<std::uint64_t> SetFamily::weight_profile() const {
  std::vector<std::uint64_t> counts(std::max(n_, 6u) + 1, 0);
  K().weight_profile(words_.data(), words_.size(), counts.data());
  counts.resize(n_ + 1);
  return counts;
}

bool SetFamily::is_increasing() const { return up_closure(*this) == *this; }

bool SetFamily::is_subset_of(const SetFamily& o) const {
  check_same_ground(o);
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

SetFamily SetFamily::complement() const {
  SetFamily r(*this);
  for (auto& w : r.words_) w = ~w;
  r.clear_padding();
  return r;
}

SetFamily& SetFamily::operator|=(const SetFamily& o) {
  check_same_ground(o);
  K().bit_or(words_.data(), o.words_.data(), words_.size());
  return *this;
}

SetFamily& SetFamily::operator&=(const SetFamily& o) {
  check_same_ground(o);
  K().bit_and(words_.data(), o.words_.data(), words_.size());
  return *this;
}

SetFamily& SetFamily::operator-=(const SetFamily& o) {
  check_same_ground(o);
  K().bit_andnot(words_.data(), o.words_.data(), words_.size());
  return *this;
}

SetFamily& SetFamily::operator^=(const SetFamily& o) {
  check_same_ground(o);
  K().bit_xor(words_.data(), o.words_.data(), words_.size());
  return *this;
}

void SetFamily::check_same_ground(const SetFamily& o) const {
  if (o.n_ != n_) throw std::invalid_argument("families live on different ground sets");
}

void SetFamily::clear_padding() { words_[0] &= padding_mask(n_); }

// ------------------------------------------------------------ UniformFamily

UniformFamily::UniformFamily(unsigned n, unsigned k) : n_(n), k_(k) {
  if (n > kMaxUniformN) throw std::invalid_argument("uniform families need n <= 64");
  if (k > n) throw std::invalid_argument("uniformity k exceeds n");
}

UniformFamily UniformFamily::from_members(unsigned n, unsigned k, std::vector<Mask> members) {
  UniformFamily f(n, k);
  const Mask uni = prefix_mask(n);
  for (Mask m : members) {
    if ((m & ~uni) != 0) throw std::invalid_argument("member " + set_string(m) + " outside [" + std::to_string(n) + "]");
    if (popcount(m) != k) throw std::invalid_argument("member " + set_string(m) + " does not have size " + std::to_string(k));
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  f.members_ = std::move(members);
  return f;
}

UniformFamily UniformFamily::slice(const SetFamily& f, unsigned k) {
  std::vector<Mask> m;
  f.for_each([&](Mask x) {
    if (popcount(x) == k) m.push_back(x);
  });
  UniformFamily u(f.n(), k);
  u.members_ = std::move(m);
  return u;
}

bool UniformFamily::contains(Mask x) const { return std::binary_search(members_.begin(), members_.end(), x); }

SetFamily UniformFamily::to_set_family() const { return SetFamily::from_members(n_, members_); }

// --------------------------------------------------------------- EdgeGround

EdgeGround::EdgeGround(unsigned v) : v_(v) {
  if (v < 2 || v * (v - 1) / 2 > kMaxDenseN) throw std::invalid_argument("edge ground needs 2 <= v <= 8");
  for (unsigned a = 1; a <= v; ++a)
    for (unsigned b = a + 1; b <= v; ++b)
      for (unsigned c = b + 1; c <= v; ++c) triangles_.push_back(triangle(a, b, c));
}

unsigned EdgeGround::edge_bit(unsigned a, unsigned b) const {
  if (a > b) std::swap(a, b);
  if (a < 1 || a == b || b > v_) throw std::invalid_argument("invalid edge");
  return (b - 1) * (b - 2) / 2 + (a - 1);
}

std::pair<unsigned, unsigned> EdgeGround::edge_at(unsigned bit) const {
  unsigned b = 2;
  while ((b * (b - 1)) / 2 <= bit) ++b;
  unsigned a = bit - (b - 1) * (b - 2) / 2 + 1;
  return {a, b};
}

Mask EdgeGround::triangle(unsigned a, unsigned b, unsigned c) const {
  return (Mask{1} << edge_bit(a, b)) | (Mask{1} << edge_bit(a, c)) | (Mask{1} << edge_bit(b, c));
}

std::string EdgeGround::edge_string(Mask graph) const {
  std::string s = "{";
  bool first = true;
  for (int e : elements_of(graph)) {
    auto [a, b] = edge_at(static_cast<unsigned>(e - 1));
    if (!first) s += ',';
    s += std::to_string(a) + std::to_string(b);
    first = false;
  }
  return s + "}";
}

GraphFamily::GraphFamily(EdgeGround g, SetFamily f) : ground(std::move(g)), family(std::move(f)) {
  if (family.n() != ground.n()) throw std::invalid_argument("graph family ground size does not match C(v,2)");
}

// ----------------------------------------------------------------- families

SetFamily umvirate(unsigned n, Mask b) {
  if ((b & ~prefix_mask(n)) != 0) throw std::invalid_argument("B outside the ground set");
  SetFamily f = SetFamily::full(n);
  std::vector<Word> w = f.words();
  for (int e : elements_of(b)) keep_with(w, static_cast<unsigned>(e - 1));
  return SetFamily::from_words(n, std::move(w));
}

SetFamily or_family(unsigned n, Mask b) {
  if ((b & ~prefix_mask(n)) != 0) throw std::invalid_argument("B outside the ground set");
  SetFamily f = SetFamily::full(n);
  std::vector<Word> w = f.words();
  for (int e : elements_of(b)) keep_without(w, static_cast<unsigned>(e - 1));
  return SetFamily::from_words(n, std::move(w)).complement();
}

// --------------------------------------------------------------- operations

SetFamily up_closure(const SetFamily& f) {
  SetFamily r(f);
  for (unsigned c = 0; c < f.n(); ++c) K().up_pass(r.data(), r.words().size(), c);
  return r;
}

SetFamily down_closure(const SetFamily& f) {
  SetFamily r(f);
  for (unsigned c = 0; c < f.n(); ++c) K().down_pass(r.data(), r.words().size(), c);
  return r;
}

SetFamily bar(const SetFamily& f) {
  // x -> universe ^ x reverses the truth table.
  const unsigned n = f.n();
  const auto& src = f.words();
  std::vector<Word> out(src.size());
  if (n < 6) {
    const unsigned bits = 1u << n;
    Word w = src[0], r = 0;
    for (unsigned i = 0; i < bits; ++i)
      if ((w >> i) & 1u) r |= Word{1} << (bits - 1 - i);
    out[0] = r;
  } else {
    for (std::size_t i = 0; i < src.size(); ++i) {
      Word w = src[i], r = 0;
      for (unsigned b = 0; b < 64; ++b) r |= ((w >> b) & 1u) << (63 - b);
      out[src.size() - 1 - i] = r;
    }
  }
  return SetFamily::from_words(n, std::move(out));
}

SetFamily dual(const SetFamily& f) { return bar(f).complement(); }

SetFamily restrict(const SetFamily& f, Mask b, Mask c) {
  if ((c & ~b) != 0) throw std::invalid_argument("restrict requires C ⊆ B");
  if ((b & ~f.universe()) != 0) throw std::invalid_argument("B outside the ground set");
  std::vector<unsigned> free_pos;
  for (unsigned i = 0; i < f.n(); ++i)
    if (!((b >> i) & 1u)) free_pos.push_back(i);
  const unsigned m = static_cast<unsigned>(free_pos.size());
  SetFamily r(m);
  const Mask end = Mask{1} << m;
  for (Mask s = 0; s < end; ++s) {
    Mask x = c;
    for (unsigned j = 0; j < m; ++j)
      if ((s >> j) & 1u) x |= Mask{1} << free_pos[j];
    if (f.contains(x)) r.insert(s);
  }
  return r;
}

std::vector<Mask> minimal_members(const SetFamily& f) {
  // x is minimal iff no x minus one element lies in the up-closure.
  SetFamily up = up_closure(f);
  std::vector<Mask> minimal;
  f.for_each([&](Mask x) {
    for (Mask rest = x; rest != 0; rest &= rest - 1)
      if (up.contains(x ^ (rest & (~rest + 1)))) return;
    minimal.push_back(x);
  });
  return minimal;
}

namespace {

Mask relabel_mask(Mask x, std::span<const int> perm) {
  Mask r = 0;
  while (x != 0) {
    unsigned i = static_cast<unsigned>(__builtin_ctzll(x));
    r |= Mask{1} << (perm[i] - 1);
    x &= x - 1;
  }
  return r;
}

void check_perm(std::span<const int> perm, unsigned n) {
  if (perm.size() != n) throw std::invalid_argument("permutation length differs from n");
  std::vector<bool> seen(n, false);
  for (int v : perm) {
    if (v < 1 || static_cast<unsigned>(v) > n || seen[v - 1]) throw std::invalid_argument("not a permutation of [n]");
    seen[v - 1] = true;
  }
}

}  // namespace

SetFamily relabel(const SetFamily& f, std::span<const int> perm) {
  check_perm(perm, f.n());
  SetFamily r(f.n());
  f.for_each([&](Mask x) { r.insert(relabel_mask(x, perm)); });
  return r;
}

UniformFamily relabel(const UniformFamily& f, std::span<const int> perm) {
  check_perm(perm, f.n());
  std::vector<Mask> m;
  m.reserve(f.size());
  for (Mask x : f.members()) m.push_back(relabel_mask(x, perm));
  return UniformFamily::from_members(f.n(), f.k(), std::move(m));
}

// --------------------------------------------------------------- predicates

bool is_t_intersecting(std::span<const Mask> members, unsigned t) {
  if (t == 0) throw std::invalid_argument("t must be at least 1");
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i; j < members.size(); ++j)
      if (popcount(members[i] & members[j]) < t) return false;
  return true;
}

bool is_t_intersecting(const SetFamily& f, unsigned t) {
  if (t == 0) throw std::invalid_argument("t must be at least 1");
  if (t == 1) return (f & down_closure(bar(f))).empty();
  // F is t-intersecting iff its minimal members are.
  return is_t_intersecting(minimal_members(f), t);
}

bool is_t_intersecting(const UniformFamily& f, unsigned t) { return is_t_intersecting(f.members(), t); }

bool are_cross_intersecting(const SetFamily& f, const SetFamily& g) {
  if (f.n() != g.n()) throw std::invalid_argument("families live on different ground sets");
  return (g & down_closure(bar(f))).empty();
}

bool are_cross_intersecting(std::span<const Mask> a, std::span<const Mask> b) {
  for (Mask x : a)
    for (Mask y : b)
      if ((x & y) == 0) return false;
  return true;
}

bool is_triangle_intersecting(const GraphFamily& f) {
  const auto& tri = f.ground.triangles();
  std::vector<Mask> m = f.family.members();
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i; j < m.size(); ++j) {
      Mask common = m[i] & m[j];
      if (std::none_of(tri.begin(), tri.end(), [&](Mask t) { return (common & t) == t; })) return false;
    }
  return true;
}

unsigned matching_number(std::span<const Mask> members) {
  unsigned extra = 0;
  std::vector<Mask> sets;
  for (Mask m : members) {
    if (m == 0)
      extra = 1;
    else
      sets.push_back(m);
  }
  // Only inclusion-minimal members matter.
  std::sort(sets.begin(), sets.end(), [](Mask a, Mask b) { return popcount(a) < popcount(b) || (popcount(a) == popcount(b) && a < b); });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<Mask> minimal;
  for (Mask s : sets)
    if (std::none_of(minimal.begin(), minimal.end(), [&](Mask m) { return (m & s) == m; })) minimal.push_back(s);

  Mask universe = 0;
  for (Mask s : minimal) universe |= s;
  std::unordered_map<Mask, unsigned> memo;
  auto best = [&](auto&& self, Mask u) -> unsigned {
    if (u == 0) return 0;
    if (auto it = memo.find(u); it != memo.end()) return it->second;
    Mask e = u & (~u + 1);
    unsigned r = self(self, u ^ e);
    for (Mask s : minimal)
      if ((s & e) && (s & ~u) == 0) r = std::max(r, 1 + self(self, u & ~s));
    memo.emplace(u, r);
    return r;
  };
  return extra + best(best, universe);
}

unsigned matching_number(const SetFamily& f) {
  // ∅ would shadow every other minimal member, so count it separately.
  if (!f.contains(0)) return matching_number(minimal_members(f));
  SetFamily rest(f);
  rest.erase(0);
  return 1 + matching_number(minimal_members(rest));
}

unsigned matching_number(const UniformFamily& f) { return matching_number(f.members()); }

Degree degree(const SetFamily& f) {
  Degree d;
  d.per_coordinate.assign(f.n(), 0);
  const auto& w = f.words();
  for (unsigned c = 0; c < f.n(); ++c) {
    std::uint64_t cnt = 0;
    if (c < 6) {
      for (Word x : w) cnt += popcount(x & ~kernels::kLowHalf[c]);
    } else {
      const std::size_t bit = std::size_t{1} << (c - 6);
      for (std::size_t i = 0; i < w.size(); ++i)
        if (i & bit) cnt += popcount(w[i]);
    }
    d.per_coordinate[c] = cnt;
    d.max = std::max(d.max, cnt);
  }
  return d;
}

Degree degree(const UniformFamily& f) {
  Degree d;
  d.per_coordinate.assign(f.n(), 0);
  for (Mask x : f.members())
    for (int e : elements_of(x)) ++d.per_coordinate[e - 1];
  for (auto c : d.per_coordinate) d.max = std::max(d.max, c);
  return d;
}

UniformFamily compress(const UniformFamily& f, unsigned i, unsigned j) {
  if (i == j || i < 1 || j < 1 || i > f.n() || j > f.n()) throw std::invalid_argument("compress needs distinct coordinates in [n]");
  const Mask bi = Mask{1} << (i - 1), bj = Mask{1} << (j - 1);
  std::vector<Mask> out;
  out.reserve(f.size());
  for (Mask a : f.members()) {
    if ((a & bj) && !(a & bi)) {
      Mask shifted = (a & ~bj) | bi;
      out.push_back(f.contains(shifted) ? a : shifted);
    } else {
      out.push_back(a);
    }
  }
  return UniformFamily::from_members(f.n(), f.k(), std::move(out));
}

bool is_shifted(const UniformFamily& f) {
  for (Mask a : f.members())
    for (unsigned j = 1; j <= f.n(); ++j) {
      const Mask bj = Mask{1} << (j - 1);
      if (!(a & bj)) continue;
      for (unsigned i = 1; i < j; ++i) {
        const Mask bi = Mask{1} << (i - 1);
        if (!(a & bi) && !f.contains((a & ~bj) | bi)) return false;
      }
    }
  return true;
}

bool is_increasing_subcube(const SetFamily& f) {
  if (f.empty()) return false;
  Mask common = f.universe();
  f.for_each([&](Mask x) { common &= x; });
  return f.contains(common) && f.size() == (std::uint64_t{1} << (f.n() - popcount(common)));
}

}  // namespace ekrlab
