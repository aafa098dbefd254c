#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ekrlab/family.hpp"
#include "ekrlab/polynomial.hpp"
#include "ekrlab/verdict.hpp"

namespace ekrlab {

/// mu_p(F) = sum over members A of p^|A| (1-p)^(n-|A|). Requires 0 <= p <= 1.
Rational mu(const SetFamily& f, const Rational& p);
Rational mu_from_profile(std::span<const std::uint64_t> counts, unsigned n, const Rational& p);
MeasurePolynomial mu_polynomial(const SetFamily& f);

/// {x : x in F xor x + e_coord in F}, coord 1-indexed.
SetFamily pivotal_set(const SetFamily& f, unsigned coord);

struct InfluenceVector {
  std::vector<MeasurePolynomial> per_coordinate;  // index j-1 for coordinate j
  MeasurePolynomial total;
};
InfluenceVector influence_polynomials(const SetFamily& f);

struct InfluenceValues {
  std::vector<Rational> per_coordinate;
  Rational total;
};
/// Exact Inf_i and I_p at 0 < p < 1.
InfluenceValues influence(const SetFamily& f, const Rational& p);

struct BoundaryEdge {
  Mask lower;      // endpoint without the coordinate
  unsigned coord;  // 1-indexed direction
};

struct EdgeBoundary {
  std::uint64_t count = 0;
  std::vector<BoundaryEdge> edges;  // filled only on request
  /// |∂A| >= |A| log2(2^n/|A|); absent for A empty (both sides 0).
  std::optional<Comparison> iso;
  bool subcube = false;  // A is a subcube (any orientation)
};
EdgeBoundary edge_boundary(const SetFamily& f, bool list_edges = false, const Tolerance& tol = {});

/// True iff F is {x : x agrees with a fixed partial assignment}.
bool is_subcube(const SetFamily& f);

struct RussoCheck {
  bool holds = false;
  MeasurePolynomial derivative;       // d/dp mu_p(F)
  MeasurePolynomial total_influence;  // I_p(F)
};
/// Exact polynomial identity d mu_p / dp = I_p. Throws for non-increasing F.
RussoCheck russo_identity(const SetFamily& f);

enum class IsoStatus { checked, vacuous, skipped };

struct IsoSlack {
  IsoStatus status = IsoStatus::skipped;
  std::string reason;       // for vacuous / skipped
  Rational mu;
  Rational total_influence;
  std::optional<Comparison> check;  // p I_p >= mu log_p mu, when checked
  bool equality = false;            // |slack| <= tau
  bool increasing = false;
  bool increasing_subcube = false;
  /// Equality reported iff F is an increasing subcube; at p = 1/2 any
  /// subcube is allowed, since reflection is measure preserving there.
  bool consistent = true;
};
/// Skewed isoperimetric slack p I_p - mu log_p mu. Domain: increasing F with
/// 0 < p < 1, or any F with 0 < p <= 1/2; otherwise status skipped. mu in
/// {0,1} gives status vacuous.
IsoSlack iso_slack(const SetFamily& f, const Rational& p, const Tolerance& tol = {});

struct LogMeasureProfile {
  std::vector<std::pair<Rational, Real>> points;  // (p, log_p mu_p)
  bool non_increasing = true;                      // within tau
  bool strictly_decreasing_somewhere = false;      // some step drops by > tau
  bool increasing_subcube = false;
  /// Strict decrease happens iff F is not an increasing subcube.
  bool consistent = true;
};
/// Requires F increasing, nonempty, not P([n]), and a strictly increasing
/// grid inside (0,1).
LogMeasureProfile log_measure_profile(const SetFamily& f, std::span<const Rational> grid, const Tolerance& tol = {});

struct TransferMode {
  enum Kind { umvirate, or_form, lex } kind = umvirate;
  Rational t = 1;
  Rational x = 1;  // lex form only
};
/// Bound function of the transfer lemma: q^t, 1-(1-q)^t or q^t(1-(1-q)^x).
Real transfer_bound(const TransferMode& mode, const Rational& q, mpfr_prec_t bits);
std::optional<Rational> transfer_bound_exact(const TransferMode& mode, const Rational& q);

/// If mu_p0(F) <= bound(p0) then mu_p(F) <= bound(p), for increasing F and
/// 0 < p < p0 < 1.
VerdictReport measure_transfer_check(const SetFamily& f, const Rational& p0, const Rational& p, const TransferMode& mode,
                                     const Tolerance& tol = {});

/// mu_p(G) <= (1 - mu_p(F))^(log_{1-p} p) for increasing cross-intersecting
/// F, G and 0 < p <= 1/2. Throws when F, G are not cross-intersecting.
VerdictReport cross_measure_bound(const SetFamily& f, const SetFamily& g, const Rational& p, const Tolerance& tol = {});

struct SubcubeDistance {
  Mask b = 0;
  Rational distance;  // mu_p(F Δ S_B)
};
/// Minimizes mu_p(F Δ S_B) over B; exhaustive for n <= 20, otherwise over
/// |B| <= t_max. Ties go to the lexicographically least B.
SubcubeDistance subcube_distance(const SetFamily& f, const Rational& p, unsigned t_max = 3);

/// Lexicographic order on sorted element lists ({1,2} < {1,3} < {2}).
bool lex_less(Mask a, Mask b);

/// Throws unless 0 <= p <= 1 (or 0 < p < 1 when open).
void check_probability(const Rational& p, bool open);

}  // namespace ekrlab
