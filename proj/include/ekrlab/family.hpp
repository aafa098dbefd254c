#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ekrlab/kernels.hpp"

namespace ekrlab {

/// Subset of a ground set; bit i-1 stands for element i.
using Mask = std::uint64_t;
using kernels::Word;

inline constexpr unsigned kMaxDenseN = 30;
inline constexpr unsigned kMaxUniformN = 64;

inline unsigned popcount(Mask m) { return static_cast<unsigned>(__builtin_popcountll(m)); }

/// [t] = {1,...,t}.
inline Mask prefix_mask(unsigned t) { return t >= 64 ? ~Mask{0} : (Mask{1} << t) - 1; }
/// {lo,...,hi}, 1-indexed, empty when hi < lo.
inline Mask range_mask(unsigned lo, unsigned hi) { return hi < lo ? 0 : prefix_mask(hi) & ~prefix_mask(lo - 1); }

Mask mask_of(std::span<const int> elements);
Mask mask_of(std::initializer_list<int> elements);
std::vector<int> elements_of(Mask m);
/// "{1,3,4}".
std::string set_string(Mask m);

/// Family on [n], n <= 30, stored as a 2^n-bit truth table.
class SetFamily {
 public:
  explicit SetFamily(unsigned n = 0);

  static SetFamily full(unsigned n);
  static SetFamily from_members(unsigned n, std::span<const Mask> members);
  static SetFamily from_words(unsigned n, std::vector<Word> words);
  template <class Pred>
  static SetFamily from_predicate(unsigned n, Pred pred) {
    SetFamily f(n);
    const Mask end = Mask{1} << n;
    for (Mask x = 0; x < end; ++x)
      if (pred(x)) f.insert(x);
    return f;
  }

  unsigned n() const { return n_; }
  Mask universe() const { return prefix_mask(n_); }

  bool contains(Mask x) const { return (words_[x >> 6] >> (x & 63)) & 1u; }
  void insert(Mask x) { words_[x >> 6] |= Word{1} << (x & 63); }
  void erase(Mask x) { words_[x >> 6] &= ~(Word{1} << (x & 63)); }

  std::uint64_t size() const;
  bool empty() const;
  std::vector<Mask> members() const;

  /// Calls fn(mask) for each member in ascending numeric order.
  template <class Fn>
  void for_each(Fn fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits != 0) {
        unsigned b = static_cast<unsigned>(__builtin_ctzll(bits));
        fn((static_cast<Mask>(w) << 6) | b);
        bits &= bits - 1;
      }
    }
  }

  const std::vector<Word>& words() const { return words_; }

  /// counts[j] = number of members of size j, j = 0..n.
  std::vector<std::uint64_t> weight_profile() const;

  bool is_increasing() const;
  bool is_subset_of(const SetFamily& other) const;

  /// F^c: all subsets of [n] not in F.
  SetFamily complement() const;

  SetFamily& operator|=(const SetFamily& o);
  SetFamily& operator&=(const SetFamily& o);
  SetFamily& operator-=(const SetFamily& o);
  SetFamily& operator^=(const SetFamily& o);
  friend SetFamily operator|(SetFamily a, const SetFamily& b) { return a |= b; }
  friend SetFamily operator&(SetFamily a, const SetFamily& b) { return a &= b; }
  friend SetFamily operator-(SetFamily a, const SetFamily& b) { return a -= b; }
  friend SetFamily operator^(SetFamily a, const SetFamily& b) { return a ^= b; }
  friend bool operator==(const SetFamily&, const SetFamily&) = default;

  Word* data() { return words_.data(); }

 private:
  void check_same_ground(const SetFamily& o) const;
  void clear_padding();

  unsigned n_;
  std::vector<Word> words_;
};

/// Family of k-subsets of [n], n <= 64, members kept sorted ascending.
class UniformFamily {
 public:
  UniformFamily(unsigned n, unsigned k);
  static UniformFamily from_members(unsigned n, unsigned k, std::vector<Mask> members);
  /// The k-slice of a dense family.
  static UniformFamily slice(const SetFamily& f, unsigned k);

  unsigned n() const { return n_; }
  unsigned k() const { return k_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<Mask>& members() const { return members_; }
  bool contains(Mask x) const;
  SetFamily to_set_family() const;

  friend bool operator==(const UniformFamily&, const UniformFamily&) = default;

 private:
  unsigned n_;
  unsigned k_;
  std::vector<Mask> members_;
};

/// Edges of the complete graph on v vertices, indexed colex on pairs:
/// 12, 13, 23, 14, 24, 34, ...
class EdgeGround {
 public:
  explicit EdgeGround(unsigned v);
  unsigned vertices() const { return v_; }
  unsigned n() const { return v_ * (v_ - 1) / 2; }
  /// 0-indexed bit of the edge {a,b}, vertices 1-indexed.
  unsigned edge_bit(unsigned a, unsigned b) const;
  std::pair<unsigned, unsigned> edge_at(unsigned bit) const;
  Mask triangle(unsigned a, unsigned b, unsigned c) const;
  /// All C(v,3) triangles, in lexicographic order of their vertex triples.
  const std::vector<Mask>& triangles() const { return triangles_; }
  std::string edge_string(Mask graph) const;

  friend bool operator==(const EdgeGround& a, const EdgeGround& b) { return a.v_ == b.v_; }

 private:
  unsigned v_;
  std::vector<Mask> triangles_;
};

/// A family of graphs on a fixed vertex set.
struct GraphFamily {
  GraphFamily(EdgeGround g, SetFamily f);
  EdgeGround ground;
  SetFamily family;
};

// Standard families.
/// S_B = {A : B ⊆ A}.
SetFamily umvirate(unsigned n, Mask b);
/// OR_B = {A : A ∩ B ≠ ∅}.
SetFamily or_family(unsigned n, Mask b);

// Operations.
SetFamily up_closure(const SetFamily& f);
SetFamily down_closure(const SetFamily& f);
/// F̄ = {[n] \ A : A ∈ F}.
SetFamily bar(const SetFamily& f);
/// F* = {[n] \ A : A ∉ F}.
SetFamily dual(const SetFamily& f);
/// F_B^C = {S ⊆ [n] \ B : S ∪ C ∈ F}, on the ground [n] \ B renumbered in
/// increasing order. Throws unless C ⊆ B.
SetFamily restrict(const SetFamily& f, Mask b, Mask c);
/// Minimal members (inclusion-wise), ascending.
std::vector<Mask> minimal_members(const SetFamily& f);
/// Applies a relabelling: element a goes to perm[a-1] (1-indexed values).
SetFamily relabel(const SetFamily& f, std::span<const int> perm);
UniformFamily relabel(const UniformFamily& f, std::span<const int> perm);

// Predicates.
bool is_t_intersecting(std::span<const Mask> members, unsigned t);
bool is_t_intersecting(const SetFamily& f, unsigned t);
bool is_t_intersecting(const UniformFamily& f, unsigned t);
bool are_cross_intersecting(const SetFamily& f, const SetFamily& g);
bool are_cross_intersecting(std::span<const Mask> a, std::span<const Mask> b);
bool is_triangle_intersecting(const GraphFamily& f);

/// Maximum number of pairwise disjoint members; ∅ counts once.
unsigned matching_number(std::span<const Mask> members);
unsigned matching_number(const SetFamily& f);
unsigned matching_number(const UniformFamily& f);

struct Degree {
  std::uint64_t max = 0;
  std::vector<std::uint64_t> per_coordinate;  // index j-1 for coordinate j
};
Degree degree(const SetFamily& f);
Degree degree(const UniformFamily& f);

/// (i,j)-shift, 1-indexed: A -> A - j + i when j ∈ A, i ∉ A and the image
/// is not already a member.
UniformFamily compress(const UniformFamily& f, unsigned i, unsigned j);
/// True when every (i,j)-shift with i < j leaves the family unchanged.
bool is_shifted(const UniformFamily& f);

/// True iff F = S_B for some B (possibly empty).
bool is_increasing_subcube(const SetFamily& f);

}  // namespace ekrlab
