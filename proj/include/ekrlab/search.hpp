#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ekrlab/family.hpp"
#include "ekrlab/json_types.hpp"
#include "ekrlab/rational.hpp"

namespace ekrlab {

/// Calls fn once for every increasing family on [n] (including the empty
/// family and P([n])). n <= 6. Families on [n] are built from pairs
/// F0 ⊆ F1 of increasing families on [n-1]: F = F0 ∪ {A + n : A ∈ F1}.
void enumerate_monotone(unsigned n, const std::function<void(const SetFamily&)>& fn);
/// Truth tables of all increasing families on [n], n <= 5, bit x <-> set x.
std::vector<std::uint32_t> monotone_tables(unsigned n);
std::uint64_t count_monotone(unsigned n);

enum class Predicate { intersecting, t_intersecting, matching_at_most };
enum class Objective { cardinality, mu_p };
const char* predicate_name(Predicate p);
Predicate parse_predicate(const std::string& name);

struct SearchProblem {
  unsigned n = 0;
  std::optional<unsigned> k;  // absent: the whole cube P([n])
  Predicate predicate = Predicate::intersecting;
  unsigned param = 1;  // t for t_intersecting, s for matching_at_most
  Objective objective = Objective::cardinality;
  Rational p{1, 2};              // mu_p objective only
  std::uint64_t node_limit = 0;  // 0 = unlimited
  double time_limit_s = 0;       // 0 = unlimited
};
Json to_json(const SearchProblem& problem);
SearchProblem parse_search_problem(const Json& j);

struct SearchOptions {
  unsigned threads = 1;
  /// Restrict to compression-closed families. Valid because (i,j)-shifts
  /// keep size, t-intersection and do not raise the matching number.
  bool shifted = false;
  std::string checkpoint_path;  // empty: no checkpoints
  bool resume = false;
  /// Decisions fixed per subtree task; 0 picks a default.
  unsigned split_depth = 0;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t pruned_bound = 0;
  std::uint64_t pruned_predicate = 0;  // candidate rejected by the predicate
  std::uint64_t pruned_shift = 0;      // candidate rejected by shift-closure
  std::uint64_t tasks = 0;
  std::uint64_t tasks_resumed = 0;
};

struct SearchCertificate {
  SearchProblem problem;
  bool shifted = false;
  Rational value;              // |F|, or mu_p(F) exactly
  std::vector<Mask> witness;   // ascending
  SearchStats stats;
  bool complete = false;       // false when a budget ran out
  bool verified = false;       // witness re-checked by the family predicates
  std::string reduction;       // reduction used in shifted mode
  /// Stats differ between thread counts; leave them out for byte-stable output.
  Json to_json(bool with_stats = false) const;
};

/// Branch and bound over the candidate sets (k-subsets of [n] in lex order,
/// or all subsets of [n]); needs at most 64 candidates. Include-first
/// branching, strict pruning against the incumbent, so the reported witness
/// is the lex-least optimum whatever the thread count.
SearchCertificate max_uniform(const SearchProblem& problem, const SearchOptions& options = {});

/// True iff the members satisfy the predicate (family_core checkers).
bool satisfies(Predicate pred, unsigned param, std::span<const Mask> members);

struct MaximalEnumeration {
  std::uint64_t families = 0;
  std::uint64_t nodes = 0;
  bool complete = true;
};
/// Every inclusion-maximal family of k-subsets of [n] satisfying the
/// predicate with at least min_size members, passed to fn as an ascending
/// member list. Needs C(n,k) <= 64. Stops early (complete = false) when
/// node_limit > 0 is exceeded.
MaximalEnumeration enumerate_maximal(unsigned n, unsigned k, Predicate pred, unsigned param, std::size_t min_size,
                                     const std::function<void(const std::vector<Mask>&)>& fn,
                                     std::uint64_t node_limit = 0);

struct MeasureCapResult {
  Rational value;             // max mu_p(F)
  std::optional<SetFamily> witness;
  std::uint64_t examined = 0;  // families passing the cap and exclusion
  bool complete = true;
};
/// max mu_p(F) over increasing F on [n] (n <= 5) with mu_p0(F) <= p0^t.
/// With `exclude_radius`, families with mu_p(F Δ S_B) <= radius for some
/// t-set B are skipped (radius 0 drops exactly the t-umvirates). Ties go to
/// the family whose ascending member list is lexicographically least.
MeasureCapResult extremal_under_measure_cap(unsigned n, const Rational& p0, unsigned t, const Rational& p,
                                            std::optional<Rational> exclude_radius = std::nullopt);

}  // namespace ekrlab
