#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ekrlab/family.hpp"
#include "ekrlab/json_types.hpp"
#include "ekrlab/real.hpp"
#include "ekrlab/verdict.hpp"
#include "ekrlab/zoo.hpp"

namespace ekrlab {

struct NearestUmvirate {
  Mask b = 0;
  Rational residual;  // mu_p(F \ S_B), or |A \ S_B| for counts
};
/// Minimizes mu_p(F \ S_B) over B in [n]^(t); exhaustive, ties to the
/// lexicographically least B.
NearestUmvirate nearest_umvirate(const SetFamily& f, unsigned t, const Rational& p);
/// Minimizes mu_p(F \ OR_B) over B in [n]^(s).
NearestUmvirate nearest_or(const SetFamily& f, unsigned s, const Rational& p);
/// Count versions for k-uniform families.
NearestUmvirate nearest_umvirate(const UniformFamily& f, unsigned t);
NearestUmvirate nearest_or(const UniformFamily& f, unsigned s);
/// Minimizes over the triangles T of the ground graph, in the order of
/// EdgeGround::triangles(). With p: mu_p(F \ S_T); without: |F \ S_T|.
NearestUmvirate nearest_triangle(const GraphFamily& f, const Rational& p);
NearestUmvirate nearest_triangle(const GraphFamily& f);

/// Exponents and constants of the bootstrapping step, for 0 < p < p0 < 1:
///   scale    = ((1-p0)/p0)^(log_{1-p0}(1-p))
///   exponent = log_p(p0) * log_{1-p0}(1-p)
///   v        = log_p(1-p)
///   c_prime  = (2^t - 1)^(-v)
struct DerivedConstants {
  Real scale, exponent, v, c_prime;
};
DerivedConstants derived_constants(const Rational& p0, const Rational& p, unsigned t,
                                   mpfr_prec_t bits = default_precision());

enum class TheoremId {
  main_biased,
  biased1,
  t_intersecting_biased,
  dual_biased,
  matching_biased,
  wilson_uniform,
  triangle_biased,
  triangle_uniform,
  matching_uniform,
  frankl_gi
};
const char* theorem_name(TheoremId id);
TheoremId parse_theorem(const std::string& name);
const std::vector<TheoremId>& all_theorems();

struct TheoremCase {
  TheoremId id = TheoremId::main_biased;
  Rational p0{1, 2};   // main_biased, dual_biased only
  Rational p{1, 4};    // biased theorems
  unsigned t = 1;      // t, or s for the dual and matching theorems
  unsigned i = 3;      // frankl_gi
  Rational eps{0};     // 0 is the limit case; the conclusion bound becomes 0
  unsigned d = 1;      // uniform theorems
  /// Existential constants of the theorems. Absent: the flags that need them
  /// are reported unresolved.
  std::optional<Rational> C, c, delta0, delta;
  std::optional<unsigned> n0;  // triangle_uniform
  /// t_intersecting_biased: use t in place of 2^t - 1 (the conjectured form).
  bool t_replaced = false;
};
Json to_json(const TheoremCase& tc);
TheoremCase parse_theorem_case(const Json& j);

using TheoremFamily = std::variant<SetFamily, UniformFamily, GraphFamily>;

/// Evaluates hypotheses, the epsilon condition and the conclusion. Throws
/// std::invalid_argument when the family has the wrong shape for the theorem
/// (dense / k-uniform / graph) or a parameter is outside (0,1). Property
/// hypotheses (increasing, t-intersecting, ...) are reported as flags.
VerdictReport check_theorem(const TheoremCase& tc, const TheoremFamily& f, const Tolerance& tol = {});

/// Both parts of the bootstrapping lemma for S_[t], with delta extracted as
/// mu_p(F \ S_[t]) / ((1-p) p^(t-1)). Part (b) needs mu_p0(F) <= p0^t and is
/// unresolved otherwise.
VerdictReport bootstrap_diagnostics(const SetFamily& f, const Rational& p0, const Rational& p, unsigned t,
                                    const Tolerance& tol = {});
/// The t-intersecting variant: mu_p(F ∩ S_[t]) <= p^t (1 - (delta/(2^t-1))^v).
VerdictReport bootstrap_intersecting(const SetFamily& f, const Rational& p, unsigned t, const Tolerance& tol = {});

/// Equalities claimed for the tightness families at the prescribed epsilon:
/// tilde_Gi (eps = p^(i-1)), tilde_H_tsr (eps = p^s, p0 the defining root),
/// tilde_F_ts (eps = t p^s, t-replaced condition), tilde_D_sdl (eps = p^l).
VerdictReport tightness_report(const FamilySpec& spec, const Rational& p, const Tolerance& tol = {});

enum class ConjectureId { t_intersecting_sharp, wilson_sharp, emc_stability };
const char* conjecture_name(ConjectureId id);
ConjectureId parse_conjecture(const std::string& name);

/// Parameter grid; a scan runs over the cartesian product of the lists that
/// matter for the conjecture (n,t,p | n,k,t,d | n,k,s,d with s in `t`).
struct ScanRanges {
  std::vector<unsigned> n;
  std::vector<unsigned> k;
  std::vector<unsigned> t;
  std::vector<unsigned> d;
  std::vector<Rational> p;
  std::uint64_t node_limit = 0;  // per tuple, 0 = unlimited
  unsigned threads = 1;
};

struct ScanCandidate {
  Json params;
  unsigned n = 0;
  std::vector<Mask> members;  // ascending
  Json details;
};

struct ScanTuple {
  Json params;
  std::uint64_t families = 0;  // families inspected
  bool complete = true;
  std::string skipped;  // reason, when the tuple is outside the conjecture's range
};

struct ScanReport {
  ConjectureId conjecture = ConjectureId::t_intersecting_sharp;
  std::vector<ScanTuple> tuples;
  std::vector<ScanCandidate> candidates;
  bool complete = true;
  Json to_json() const;
};

/// Searches the grid for counterexamples, in canonical tuple order whatever
/// the thread count.
///  - t_intersecting_sharp: increasing t-intersecting families on [n], n <= 5.
///  - wilson_sharp, emc_stability: inclusion-maximal families above the size
///    threshold (a counterexample exists iff a maximal one does).
ScanReport conjecture_scan(ConjectureId id, const ScanRanges& ranges, const Tolerance& tol = {});

}  // namespace ekrlab
