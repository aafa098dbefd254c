#include "ekrlab/zoo.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace ekrlab {

long FamilySpec::get(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw std::invalid_argument(name + ": missing parameter " + key);
  return it->second;
}

long FamilySpec::get_or(const std::string& key, long fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

FamilySpec parse_family_spec(const Json& j) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string())
    throw std::invalid_argument("family spec needs a string \"name\"");
  FamilySpec s;
  s.name = j["name"].get<std::string>();
  if (std::find(zoo_names().begin(), zoo_names().end(), s.name) == zoo_names().end())
    throw std::invalid_argument("unknown family name: " + s.name);
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw std::invalid_argument("\"params\" must be an object");
    for (auto& [k, v] : j["params"].items()) {
      if (!v.is_number_integer()) throw std::invalid_argument("parameter " + k + " must be an integer");
      s.params[k] = v.get<long>();
    }
  }
  if (j.contains("perm")) s.perm = j["perm"].get<std::vector<int>>();
  return s;
}

Json to_json(const FamilySpec& spec) {
  Json j;
  j["name"] = spec.name;
  Json p = Json::object();
  for (auto& [k, v] : spec.params) p[k] = v;
  j["params"] = std::move(p);
  if (!spec.perm.empty()) j["perm"] = spec.perm;
  return j;
}

const std::vector<std::string>& zoo_names() {
  static const std::vector<std::string> names = {
      "dictatorship", "t_umvirate",  "or_family",   "ak_family", "frankl_Gi",    "tilde_Gi", "F_ts",
      "tilde_F_ts",   "tilde_H_tsr", "tilde_D_sdl", "C_ts_lex",  "hm_matching_E", "conj_H",   "triangle_umvirate"};
  return names;
}

bool is_uniform_spec(const std::string& name) {
  return name == "ak_family" || name == "frankl_Gi" || name == "F_ts" || name == "hm_matching_E" || name == "conj_H";
}

namespace {

[[noreturn]] void bad(const FamilySpec& s, const std::string& what) {
  throw std::invalid_argument(s.name + ": parameter range violated: " + what);
}

void need(const FamilySpec& s, bool ok, const std::string& what) {
  if (!ok) bad(s, what);
}

// Membership predicate over masks of [n], for every spec except
// hm_matching_E and triangle_umvirate.
using Pred = std::function<bool(Mask)>;

Pred predicate(const FamilySpec& s, unsigned n) {
  const std::string& nm = s.name;
  if (nm == "dictatorship") {
    long j = s.get_or("j", 1);
    need(s, j >= 1 && j <= static_cast<long>(n), "1 <= j <= n");
    Mask b = Mask{1} << (j - 1);
    return [b](Mask a) { return (a & b) != 0; };
  }
  if (nm == "t_umvirate") {
    long t = s.get("t");
    need(s, t >= 1 && t <= static_cast<long>(n), "1 <= t <= n");
    Mask b = prefix_mask(t);
    return [b](Mask a) { return (a & b) == b; };
  }
  if (nm == "or_family") {
    long t = s.get("t");
    need(s, t >= 1 && t <= static_cast<long>(n), "1 <= t <= n");
    Mask b = prefix_mask(t);
    return [b](Mask a) { return (a & b) != 0; };
  }
  if (nm == "ak_family") {
    long t = s.get("t"), r = s.get("r"), k = s.get("k");
    need(s, t >= 1 && r >= 0, "t >= 1, r >= 0");
    need(s, t + 2 * r <= static_cast<long>(n), "t + 2r <= n");
    need(s, t + r <= k, "t + r <= k");
    Mask b = prefix_mask(t + 2 * r);
    unsigned lim = static_cast<unsigned>(t + r);
    return [b, lim](Mask a) { return popcount(a & b) >= lim; };
  }
  if (nm == "frankl_Gi" || nm == "tilde_Gi") {
    long i = s.get("i");
    need(s, i >= 3 && i <= static_cast<long>(n), "3 <= i <= n");
    if (nm == "frankl_Gi") need(s, i <= s.get("k") + 1, "i <= k + 1");
    Mask blk = range_mask(2, i);
    return [blk](Mask a) { return (a & 1) ? (a & blk) != 0 : (a & blk) == blk; };
  }
  if (nm == "F_ts" || nm == "tilde_F_ts") {
    long t = s.get("t"), sz = s.get("s");
    need(s, t >= 1 && sz >= 1, "t, s >= 1");
    need(s, t + sz <= static_cast<long>(n), "t + s <= n");
    Mask head = prefix_mask(t), blk = range_mask(t + 1, t + sz);
    unsigned tt = static_cast<unsigned>(t);
    return [head, blk, tt](Mask a) {
      unsigned h = popcount(a & head);
      return (h == tt && (a & blk) != 0) || (h + 1 == tt && (a & blk) == blk);
    };
  }
  if (nm == "tilde_H_tsr") {
    long t = s.get("t"), sz = s.get("s"), r = s.get("r");
    need(s, t >= 1 && sz >= 1 && r >= 1, "t, s, r >= 1");
    need(s, t + std::max(sz, r) <= static_cast<long>(n), "t + max(s, r) <= n");
    Mask head = prefix_mask(t), lower = prefix_mask(t - 1), tbit = Mask{1} << (t - 1);
    Mask rblk = range_mask(t + 1, t + r), sblk = range_mask(t + 1, t + sz);
    return [=](Mask a) {
      return ((a & head) == head && (a & rblk) != 0) || ((a & lower) == lower && !(a & tbit) && (a & sblk) == sblk);
    };
  }
  if (nm == "tilde_D_sdl" || nm == "conj_H") {
    long sz = s.get("s"), d = s.get("d");
    long l = nm == "conj_H" ? d : s.get("l");
    need(s, sz >= 1 && d >= 1 && l >= 1, "s, d, l >= 1");
    need(s, sz + std::max(d, l) <= static_cast<long>(n), "s + max(d, l) <= n");
    Mask front = prefix_mask(sz - 1), head = prefix_mask(sz), sbit = Mask{1} << (sz - 1);
    Mask dblk = range_mask(sz + 1, sz + d), lblk = range_mask(sz + 1, sz + l);
    return [=](Mask a) {
      if (a & front) return true;
      Mask h = a & head;
      if (h == sbit) return (a & dblk) != 0;
      return h == 0 && (a & lblk) == lblk;
    };
  }
  if (nm == "C_ts_lex") {
    long t = s.get("t"), sz = s.get("s");
    need(s, t >= 1 && sz >= 1, "t, s >= 1");
    need(s, t + sz <= static_cast<long>(n), "t + s <= n");
    Mask head = prefix_mask(t), blk = range_mask(t + 1, t + sz);
    return [head, blk](Mask a) { return (a & head) == head && (a & blk) != 0; };
  }
  throw std::invalid_argument("no predicate for " + nm);
}

unsigned ground(const FamilySpec& s) {
  long n = s.get("n");
  if (n < 1) bad(s, "n >= 1");
  return static_cast<unsigned>(n);
}

std::vector<Mask> k_subsets(const FamilySpec& s, unsigned n, unsigned k, const Pred& keep) {
  if (n > kMaxUniformN || k > n) bad(s, "k <= n <= 64");
  if (binom(n, k) > 50000000) throw std::invalid_argument(s.name + ": C(n,k) too large to enumerate");
  std::vector<Mask> out;
  if (k == 0) {
    if (keep(0)) out.push_back(0);
    return out;
  }
  const Mask last = prefix_mask(n) & ~prefix_mask(n - k);
  for (Mask x = prefix_mask(k);;) {
    if (keep(x)) out.push_back(x);
    if (x == last) break;
    const Mask lo = x & (~x + 1);
    const Mask hi = x + lo;
    x = hi | (((x ^ hi) >> 2) / lo);
  }
  return out;
}

}  // namespace

MatchingLayout matching_layout(unsigned n, unsigned k, unsigned s) {
  if (s < 1 || k < 1) throw std::invalid_argument("hm_matching_E: parameter range violated: s, k >= 1");
  if (static_cast<unsigned long>(n) < static_cast<unsigned long>(s) * k + 1)
    throw std::invalid_argument("hm_matching_E: parameter range violated: n >= sk + 1");
  MatchingLayout lay;
  for (unsigned i = 0; i < s; ++i) lay.x.push_back(static_cast<int>(i + 1));
  unsigned next = s + 1;  // first unused coordinate
  for (unsigned i = 1; i <= s; ++i) {
    Mask block = i < s ? Mask{1} << i : 0;  // x_i = i+1 is bit i
    unsigned take = i < s ? k - 1 : k;
    for (unsigned c = 0; c < take; ++c, ++next) block |= Mask{1} << (next - 1);
    lay.blocks.push_back(block);
  }
  return lay;
}

ZooFamily construct(const FamilySpec& spec) {
  ZooFamily out;
  const std::string& nm = spec.name;
  if (std::find(zoo_names().begin(), zoo_names().end(), nm) == zoo_names().end())
    throw std::invalid_argument("unknown family name: " + nm);

  if (nm == "triangle_umvirate") {
    long v = spec.get("v");
    need(spec, v >= 3 && v <= 8, "3 <= v <= 8");
    EdgeGround g(static_cast<unsigned>(v));
    out.graph = GraphFamily(g, umvirate(g.n(), g.triangle(1, 2, 3)));
    return out;
  }

  const unsigned n = ground(spec);
  std::optional<unsigned> k;
  if (spec.has("k")) {
    long kk = spec.get("k");
    need(spec, kk >= 0 && kk <= static_cast<long>(n), "0 <= k <= n");
    k = static_cast<unsigned>(kk);
  }
  if (is_uniform_spec(nm) && !k) bad(spec, "k is required");

  if (nm == "hm_matching_E") {
    const unsigned s = static_cast<unsigned>(spec.get("s"));
    auto lay = matching_layout(n, *k, s);
    std::vector<Mask> tails(s + 1, 0);  // tails[i] = T_{i+1} ∪ ... ∪ T_s
    for (int i = static_cast<int>(s) - 1; i >= 0; --i) tails[i] = tails[i + 1] | lay.blocks[i];
    auto keep = [&](Mask a) {
      for (unsigned i = 0; i < s; ++i)
        if ((a >> (lay.x[i] - 1)) & 1u && (a & tails[i]) != 0) return true;
      return std::find(lay.blocks.begin(), lay.blocks.end(), a) != lay.blocks.end();
    };
    out.uniform = UniformFamily::from_members(n, *k, k_subsets(spec, n, *k, keep));
  } else {
    Pred pred = predicate(spec, n);
    if (is_uniform_spec(nm)) {
      out.uniform = UniformFamily::from_members(n, *k, k_subsets(spec, n, *k, pred));
    } else {
      if (n > kMaxDenseN) bad(spec, "n <= 30 for dense families");
      if (nm == "dictatorship")
        out.dense = umvirate(n, Mask{1} << (spec.get_or("j", 1) - 1));
      else if (nm == "t_umvirate")
        out.dense = umvirate(n, prefix_mask(spec.get("t")));
      else if (nm == "or_family")
        out.dense = or_family(n, prefix_mask(spec.get("t")));
      else
        out.dense = SetFamily::from_predicate(n, pred);
      if (k) out.uniform = UniformFamily::slice(*out.dense, *k);
    }
  }

  if (!spec.perm.empty()) {
    if (out.dense) out.dense = relabel(*out.dense, spec.perm);
    if (out.uniform) out.uniform = relabel(*out.uniform, spec.perm);
  }
  return out;
}

bool has_closed_form_mu(const std::string& nm) {
  return nm == "dictatorship" || nm == "t_umvirate" || nm == "or_family" || nm == "tilde_Gi" || nm == "tilde_F_ts" ||
         nm == "tilde_H_tsr" || nm == "tilde_D_sdl" || nm == "C_ts_lex" || nm == "triangle_umvirate";
}

Rational closed_form_mu(const FamilySpec& spec, const Rational& p) {
  if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0,1]");
  const std::string& nm = spec.name;
  if (!has_closed_form_mu(nm)) throw std::invalid_argument(nm + ": no closed form");
  const Rational q = 1 - p;
  auto P = [&](long e) { return pow(p, static_cast<unsigned>(e)); };
  auto Q = [&](long e) { return pow(q, static_cast<unsigned>(e)); };
  if (nm == "dictatorship") return p;
  if (nm == "t_umvirate") return P(spec.get("t"));
  if (nm == "or_family") return 1 - Q(spec.get("t"));
  if (nm == "triangle_umvirate") return P(3);
  if (nm == "tilde_Gi") {
    long i = spec.get("i");
    return p * (1 - Q(i - 1)) + q * P(i - 1);
  }
  if (nm == "tilde_F_ts") {
    long t = spec.get("t"), s = spec.get("s");
    return P(t) * (1 - Q(s)) + Rational(t) * P(t - 1) * q * P(s);
  }
  if (nm == "tilde_H_tsr") {
    long t = spec.get("t"), s = spec.get("s"), r = spec.get("r");
    return P(t) * (1 - Q(r)) + q * P(t + s - 1);
  }
  if (nm == "tilde_D_sdl") {
    long s = spec.get("s"), d = spec.get("d"), l = spec.get("l");
    return 1 - Q(s - 1) + Q(s - 1) * (p * (1 - Q(d)) + q * P(l));
  }
  // C_ts_lex
  return P(spec.get("t")) * (1 - Q(spec.get("s")));
}

BigInt ak_size(unsigned n, unsigned k, unsigned t, unsigned r) {
  const long block = static_cast<long>(t) + 2L * r;
  BigInt total = 0;
  for (long j = t + r; j <= block; ++j) total += binom(block, j) * binom(static_cast<long>(n) - block, static_cast<long>(k) - j);
  return total;
}

AkMax ak_max(unsigned n, unsigned k, unsigned t) {
  AkMax best;
  best.size = -1;
  for (unsigned r = 0; t + 2 * r <= n && t + r <= k; ++r) {
    BigInt sz = ak_size(n, k, t, r);
    if (sz > best.size) {
      best.size = sz;
      best.argmax = {r};
    } else if (sz == best.size) {
      best.argmax.push_back(r);
    }
  }
  if (best.argmax.empty()) throw std::invalid_argument("ak_max: no valid r (needs t <= k and t <= n)");
  return best;
}

bool has_closed_form_size(const std::string& nm) {
  return nm != "triangle_umvirate";
}

BigInt closed_form_size(const FamilySpec& spec) {
  const std::string& nm = spec.name;
  if (!has_closed_form_size(nm)) throw std::invalid_argument(nm + ": no closed-form size");
  const long n = spec.get("n"), k = spec.get("k");
  auto C = [](long a, long b) { return binom(a, b); };
  if (nm == "dictatorship") return C(n - 1, k - 1);
  if (nm == "t_umvirate") {
    long t = spec.get("t");
    return C(n - t, k - t);
  }
  if (nm == "or_family") return C(n, k) - C(n - spec.get("t"), k);
  if (nm == "ak_family")
    return ak_size(static_cast<unsigned>(n), static_cast<unsigned>(k), static_cast<unsigned>(spec.get("t")),
                   static_cast<unsigned>(spec.get("r")));
  if (nm == "frankl_Gi" || nm == "tilde_Gi") {
    long i = spec.get("i");
    return C(n - 1, k - 1) - C(n - i, k - 1) + C(n - i, k - i + 1);
  }
  if (nm == "F_ts" || nm == "tilde_F_ts") {
    long t = spec.get("t"), s = spec.get("s");
    return C(n - t, k - t) - C(n - t - s, k - t) + t * C(n - t - s, k - t - s + 1);
  }
  if (nm == "C_ts_lex") {
    long t = spec.get("t"), s = spec.get("s");
    return C(n - t, k - t) - C(n - t - s, k - t);
  }
  if (nm == "tilde_H_tsr") {
    long t = spec.get("t"), s = spec.get("s"), r = spec.get("r");
    return C(n - t, k - t) - C(n - t - r, k - t) + C(n - t - s, k - t - s + 1);
  }
  if (nm == "tilde_D_sdl" || nm == "conj_H") {
    long s = spec.get("s"), d = spec.get("d");
    long l = nm == "conj_H" ? d : spec.get("l");
    return C(n, k) - C(n - s + 1, k) + C(n - s, k - 1) - C(n - s - d, k - 1) + C(n - s - l, k - l);
  }
  // hm_matching_E
  const long s = spec.get("s");
  matching_layout(static_cast<unsigned>(n), static_cast<unsigned>(k), static_cast<unsigned>(s));
  BigInt total = s;
  for (long i = 0; i < s; ++i) total += C(n - i - 1, k - 1) - C(n - i - 1 - (s - i) * k, k - 1);
  return total;
}

DefiningRoot defining_root(unsigned a, unsigned b, mpfr_prec_t bits) {
  if (a < 2 || b < 2) throw std::invalid_argument("defining_root needs both exponents >= 2");
  const mpfr_prec_t work = bits + 64;
  // g(p) = (a-1) ln(1-p) - (b-1) ln p, strictly decreasing from +inf to -inf
  auto g = [&](const Rational& p) {
    Real pr(p, work), one(1, work);
    return Real(static_cast<long>(a - 1), work) * log(one - pr) - Real(static_cast<long>(b - 1), work) * log(pr);
  };
  DefiningRoot root{Real(bits), 0, 1, std::nullopt, false};
  if (a == b) {
    root.lo = root.hi = Rational(1, 2);
    root.exact = Rational(1, 2);
    root.value = Real(Rational(1, 2), bits);
    root.sign_change = true;
    return root;
  }
  Rational lo(0), hi(1);
  for (mpfr_prec_t i = 0; i < bits + 2; ++i) {
    Rational mid = (lo + hi) / 2;
    int sg = g(mid).sign();
    if (sg == 0) {
      lo = hi = mid;
      break;
    }
    (sg > 0 ? lo : hi) = mid;
  }
  root.lo = lo;
  root.hi = hi;
  root.value = Real((lo + hi) / 2, bits);
  if (lo == hi) {
    root.exact = lo;
    root.sign_change = true;
  } else {
    root.sign_change = lo > 0 && hi < 1 && g(lo).sign() > 0 && g(hi).sign() < 0;
  }
  return root;
}

DefiningRoot defining_root(const FamilySpec& spec, mpfr_prec_t bits) {
  if (spec.name == "tilde_H_tsr") {
    long r = spec.get("r"), s = spec.get("s");
    if (r < 2 || s < 2) throw std::invalid_argument("tilde_H_tsr: parameter range violated: r, s >= 2");
    return defining_root(static_cast<unsigned>(r), static_cast<unsigned>(s), bits);
  }
  if (spec.name == "tilde_D_sdl") {
    long d = spec.get("d"), l = spec.get("l");
    if (d < 2 || l < 2) throw std::invalid_argument("tilde_D_sdl: parameter range violated: d, l >= 2");
    return defining_root(static_cast<unsigned>(d), static_cast<unsigned>(l), bits);
  }
  throw std::invalid_argument(spec.name + ": no defining root");
}

}  // namespace ekrlab
