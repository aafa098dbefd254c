#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ekrlab/family.hpp"
#include "ekrlab/json_types.hpp"
#include "ekrlab/rational.hpp"
#include "ekrlab/real.hpp"

namespace ekrlab {

/// A named family with integer parameters. Distinguished coordinates sit in
/// an initial block; `perm` (1-indexed images) relabels the result.
struct FamilySpec {
  std::string name;
  std::map<std::string, long> params;
  std::vector<int> perm;

  long get(const std::string& key) const;
  long get_or(const std::string& key, long fallback) const;
  bool has(const std::string& key) const { return params.count(key) != 0; }
};

/// {"name": ..., "params": {...}, "perm": [...]}.
FamilySpec parse_family_spec(const Json& j);
Json to_json(const FamilySpec& spec);

/// All recognised names.
const std::vector<std::string>& zoo_names();
/// True for families that are k-uniform by definition (k required).
bool is_uniform_spec(const std::string& name);

struct ZooFamily {
  std::optional<SetFamily> dense;        // on P([n]); absent for uniform-only specs
  std::optional<UniformFamily> uniform;  // k-slice, when k is given or required
  std::optional<GraphFamily> graph;      // triangle_umvirate
};

/// Builds the family. Dense specs also accept k and then fill `uniform`
/// with their k-slice. Throws std::invalid_argument naming the violated range.
ZooFamily construct(const FamilySpec& spec);

/// Printed closed-form measure at p, exact. Throws "no closed form" for
/// specs without one.
Rational closed_form_mu(const FamilySpec& spec, const Rational& p);
bool has_closed_form_mu(const std::string& name);

/// Exact size of the k-uniform family (or k-slice of a dense one).
BigInt closed_form_size(const FamilySpec& spec);
bool has_closed_form_size(const std::string& name);

/// |F_{n,k,t,r}| = sum_{j >= t+r} C(t+2r, j) C(n-t-2r, k-j).
BigInt ak_size(unsigned n, unsigned k, unsigned t, unsigned r);

struct AkMax {
  BigInt size;
  std::vector<unsigned> argmax;  // every r attaining the maximum
};
/// Max over valid r (t+2r <= n, t+r <= k) of |F_{n,k,t,r}|.
AkMax ak_max(unsigned n, unsigned k, unsigned t);

struct DefiningRoot {
  Real value;
  Rational lo, hi;                // lo < root < hi, or lo == hi == root
  std::optional<Rational> exact;  // when the root is 1/2
  bool sign_change = false;       // g(lo) > 0 > g(hi) confirmed
};
/// Root in (0,1) of (1-p)^(a-1) = p^(b-1) with (a,b) = (r,s) for
/// tilde_H_tsr and (d,l) for tilde_D_sdl. Needs a, b >= 2.
DefiningRoot defining_root(const FamilySpec& spec, mpfr_prec_t bits = default_precision());
DefiningRoot defining_root(unsigned a, unsigned b, mpfr_prec_t bits = default_precision());

/// E(n,k,s) layout: x0 = 1, x_i = i+1 (1 <= i < s); T_i = {x_i} plus the
/// next k-1 unused coordinates after s, T_s the next k. Needs n >= sk+1.
struct MatchingLayout {
  std::vector<int> x;  // x_0 .. x_{s-1}
  std::vector<Mask> blocks;  // T_1 .. T_s
};
MatchingLayout matching_layout(unsigned n, unsigned k, unsigned s);

}  // namespace ekrlab
