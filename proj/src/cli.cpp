#include "ekrlab/cli.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "ekrlab/family_io.hpp"
#include "ekrlab/measure.hpp"
#include "ekrlab/search.hpp"
#include "ekrlab/shadow.hpp"
#include "ekrlab/stability.hpp"
#include "ekrlab/zoo.hpp"

namespace ekrlab {

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string tau = "1/1000000000000";
  bool csv = false;
  bool stats = false;
};

struct FamilySource {
  std::string file;
  std::string spec;
};

struct Loaded {
  std::optional<SetFamily> dense;
  std::optional<UniformFamily> uniform;
  std::optional<GraphFamily> graph;
  Json source;
};

Rational rational_arg(const std::string& text, const char* what) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

std::vector<Rational> rational_args(const std::vector<std::string>& texts, const char* what) {
  std::vector<Rational> out;
  for (const auto& t : texts) out.push_back(rational_arg(t, what));
  return out;
}

void add_family_options(CLI::App* app, FamilySource& src) {
  app->add_option("--family", src.file, "family file (JSON)");
  app->add_option("--spec", src.spec, "zoo family spec (JSON)");
}

bool has_family(const FamilySource& src) { return !src.file.empty() || !src.spec.empty(); }

Loaded load_family(const FamilySource& src) {
  if (src.file.empty() == src.spec.empty()) throw UsageError("give exactly one of --family and --spec");
  Loaded out;
  if (!src.spec.empty()) {
    Json j;
    try {
      j = Json::parse(src.spec);
    } catch (const Json::parse_error& e) {
      throw UsageError(std::string("--spec: ") + e.what());
    }
    const FamilySpec spec = parse_family_spec(j);
    auto z = construct(spec);
    out.dense = std::move(z.dense);
    out.uniform = std::move(z.uniform);
    out.graph = std::move(z.graph);
    if (!out.dense && out.graph) out.dense = out.graph->family;
    out.source = to_json(spec);
    return out;
  }
  const FamilyDocument doc = read_family_file(src.file);
  out.source = {{"file", src.file}};
  if (doc.vertices) {
    out.graph = to_graph_family(doc);
    out.dense = out.graph->family;
    return out;
  }
  out.dense = to_set_family(doc);
  const bool same_size =
      !doc.sets.empty() && std::all_of(doc.sets.begin(), doc.sets.end(), [&](Mask x) { return popcount(x) == popcount(doc.sets.front()); });
  if (doc.k || same_size) out.uniform = to_uniform_family(doc);
  return out;
}

const SetFamily& need_dense(const Loaded& l) {
  if (!l.dense) throw UsageError("this command needs a family on P([n])");
  return *l.dense;
}

const UniformFamily& need_uniform(const Loaded& l) {
  if (!l.uniform) throw UsageError("this command needs a k-uniform family");
  return *l.uniform;
}

std::string normalized(std::string s) {
  std::string out;
  for (char c : s)
    if (c != '_' && c != '-') out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

TheoremId theorem_arg(const std::string& name) {
  for (TheoremId id : all_theorems())
    if (normalized(theorem_name(id)) == normalized(name)) return id;
  throw UsageError("unknown theorem '" + name + "'");
}

ConjectureId conjecture_arg(const std::string& name) {
  for (ConjectureId id : {ConjectureId::t_intersecting_sharp, ConjectureId::wilson_sharp, ConjectureId::emc_stability})
    if (normalized(conjecture_name(id)) == normalized(name)) return id;
  throw UsageError("unknown conjecture '" + name + "'");
}

// Every option the user gave, plus defaults of the others, in declaration
// order. --threads and --stats are left out so the output does not depend on them.
Json recorded_inputs(const CLI::App* sub) {
  Json in = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    if (opt->get_expected_max() == 0) {
      in[name] = opt->count() > 0;
      continue;
    }
    if (opt->count() > 0) {
      const auto& r = opt->results();
      if (opt->get_items_expected_max() > 1) in[name] = r;
      else in[name] = r.back();
    } else if (!opt->get_default_str().empty()) {
      in[name] = opt->get_default_str();
    }
  }
  return in;
}

struct Context {
  std::string subcommand;
  Json inputs;
  Tolerance tol;
  Globals g;
  std::ostream* out;
  std::ostream* err;

  Json header() const {
    return {{"tool", "ekrlab"},
            {"version", kVersion},
            {"subcommand", subcommand},
            {"inputs", inputs},
            {"precision_bits", static_cast<long>(tol.bits)},
            {"tau", to_string(tol.tau)}};
  }
  void emit(Json result) const {
    Json doc = {{"header", header()}, {"result", std::move(result)}};
    *out << doc.dump(2) << "\n";
  }
  void csv_header(const std::vector<std::string>& cols) const {
    *out << "# ekrlab " << kVersion << " " << subcommand << "\n";
    *out << "# inputs: " << inputs.dump() << "\n";
    *out << "# precision_bits: " << tol.bits << "\n";
    *out << "# tau: " << to_string(tol.tau) << "\n";
    for (std::size_t i = 0; i < cols.size(); ++i) *out << (i ? "," : "") << cols[i];
    *out << "\n";
  }
};

// Runs fn(i) for i in [0, count) on up to `threads` workers; callers write to
// slot i so the merge order is fixed.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i);
    });
  for (auto& t : pool) t.join();
}

// ---- measure / influence ----------------------------------------------------

int cmd_measure(const Context& cx, const FamilySource& src, const std::vector<std::string>& ps) {
  const Loaded l = load_family(src);
  const SetFamily& f = need_dense(l);
  Json vals = Json::array();
  for (const Rational& p : rational_args(ps, "--p")) {
    check_probability(p, false);
    vals.push_back({{"p", to_string(p)}, {"mu", to_string(mu(f, p))}});
  }
  cx.emit({{"family", l.source},
           {"n", f.n()},
           {"size", f.size()},
           {"increasing", f.is_increasing()},
           {"polynomial", mu_polynomial(f).str()},
           {"values", std::move(vals)}});
  return exit_ok;
}

int cmd_influence(const Context& cx, const FamilySource& src, const std::vector<std::string>& ps) {
  const Loaded l = load_family(src);
  const SetFamily& f = need_dense(l);
  const auto polys = influence_polynomials(f);
  Json per = Json::array();
  for (const auto& q : polys.per_coordinate) per.push_back(q.str());
  Json vals = Json::array();
  for (const Rational& p : rational_args(ps, "--p")) {
    check_probability(p, false);
    const auto inf = influence(f, p);
    Json coords = Json::array();
    for (const auto& x : inf.per_coordinate) coords.push_back(to_string(x));
    vals.push_back({{"p", to_string(p)}, {"per_coordinate", std::move(coords)}, {"total", to_string(inf.total)}});
  }
  cx.emit({{"family", l.source},
           {"n", f.n()},
           {"polynomials", {{"per_coordinate", std::move(per)}, {"total", polys.total.str()}}},
           {"values", std::move(vals)}});
  return exit_ok;
}

// ---- shadow / katona / kk ----------------------------------------------------

int cmd_shadow(const Context& cx, const FamilySource& src, unsigned s, bool upper) {
  const Loaded l = load_family(src);
  if (l.uniform) {
    const UniformFamily& a = *l.uniform;
    const UniformFamily sh = upper ? upper_shadow(a, s) : lower_shadow(a, s);
    const BigInt m(static_cast<unsigned long>(a.size()));
    const BigInt bound = upper ? kk_min_upper_shadow(a.n(), m, a.k(), s) : kk_min_shadow(m, a.k(), s);
    const bool ok = BigInt(static_cast<unsigned long>(sh.size())) >= bound;
    cx.emit({{"family", l.source},
             {"direction", upper ? "upper" : "lower"},
             {"s", s},
             {"size", a.size()},
             {"shadow_size", sh.size()},
             {"kk_bound", to_string(bound)},
             {"kk_holds", ok},
             {"shadow", to_json(sh)}});
    return ok ? exit_ok : exit_check_failed;
  }
  const SetFamily& f = need_dense(l);
  if (upper) throw UsageError("--upper needs a k-uniform family");
  const SetFamily sh = increasing_shadow(f, s);
  cx.emit({{"family", l.source}, {"direction", "increasing"}, {"s", s}, {"shadow_size", sh.size()}, {"shadow", to_json(sh)}});
  return exit_ok;
}

int cmd_katona(const Context& cx, const FamilySource& src, unsigned t, const std::string& p_text) {
  const Loaded l = load_family(src);
  VerdictReport r;
  if (!p_text.empty()) {
    const Rational p = rational_arg(p_text, "--p");
    r = katona_check(need_dense(l), t, p);
  } else {
    r = katona_check(need_uniform(l), t);
  }
  cx.emit({{"family", l.source}, {"report", r.to_json()}});
  return r.status == Status::violated ? exit_check_failed : exit_ok;
}

int cmd_kk(const Context& cx, const std::string& m_text, unsigned k, unsigned s, std::optional<unsigned> n) {
  BigInt m;
  if (m_text.empty() || m.set_str(m_text, 10) != 0 || m < 0) throw UsageError("--m: expected a nonnegative integer");
  if (k == 0) throw UsageError("--k must be positive");
  Json casc = Json::array();
  for (auto [a, i] : cascade(m, k)) casc.push_back({{"a", a}, {"i", i}});
  Json res = {{"m", to_string(m)}, {"k", k}, {"s", s}, {"cascade", std::move(casc)}, {"min_shadow", to_string(kk_min_shadow(m, k, s))}};
  int code = exit_ok;
  if (n) {
    if (m > binom(*n, k)) throw UsageError("--m exceeds C(n,k)");
    res["n"] = *n;
    res["min_upper_shadow"] = to_string(kk_min_upper_shadow(*n, m, k, s));
    if (*n <= 20) {
      // The colex segment attains the lower bound, the lex segment the upper one.
      const auto mm = m.get_ui();
      const auto low = lower_shadow(colex_segment(*n, k, mm).family(), s).size();
      const auto up = upper_shadow(lex_segment(*n, k, mm).family(), s).size();
      const bool ok = BigInt(static_cast<unsigned long>(low)) == kk_min_shadow(m, k, s) &&
                      BigInt(static_cast<unsigned long>(up)) == kk_min_upper_shadow(*n, m, k, s);
      res["colex_shadow_size"] = low;
      res["lex_upper_shadow_size"] = up;
      res["segments_attain"] = ok;
      if (!ok) code = exit_check_failed;
    }
  }
  cx.emit(std::move(res));
  return code;
}

// ---- sweeps ------------------------------------------------------------------

struct SweepRow {
  std::string family_id;
  Rational p;
  IsoSlack iso;
  std::string log_p_mu;
};

std::string log_p_mu(const Rational& m, const Rational& p, mpfr_prec_t bits) {
  if (m <= 0) return "";
  if (m == 1) return "0";
  return log_base(Real(m, bits), Real(p, bits)).str();
}

SweepRow sweep_row(std::string id, const SetFamily& f, const Rational& p, const Tolerance& tol) {
  SweepRow r;
  r.family_id = std::move(id);
  r.p = p;
  r.iso = iso_slack(f, p, tol);
  r.log_p_mu = log_p_mu(r.iso.mu, p, tol.bits);
  return r;
}

const char* iso_status(IsoStatus s) {
  switch (s) {
    case IsoStatus::checked: return "checked";
    case IsoStatus::vacuous: return "vacuous";
    case IsoStatus::skipped: return "skipped";
  }
  return "?";
}

// Streams the families of a sweep in a fixed order, in batches.
using FamilyBatchFn = std::function<void(std::vector<std::pair<std::string, SetFamily>>&)>;

void for_each_batch(const std::function<void(const std::function<void(std::string, SetFamily)>&)>& source,
                    const FamilyBatchFn& fn) {
  std::vector<std::pair<std::string, SetFamily>> batch;
  source([&](std::string id, SetFamily f) {
    batch.emplace_back(std::move(id), std::move(f));
    if (batch.size() == 4096) {
      fn(batch);
      batch.clear();
    }
  });
  if (!batch.empty()) fn(batch);
}

struct SweepSource {
  FamilySource family;
  unsigned n = 0;
  bool all_monotone = false;
  unsigned random = 0;
  unsigned max_n = 12;
  std::uint64_t seed = 1;
};

SetFamily random_monotone(unsigned n, std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned> gens(1, 4);
  std::uniform_int_distribution<Mask> pick(0, (Mask{1} << n) - 1);
  SetFamily f(n);
  for (unsigned g = gens(rng); g > 0; --g) f.insert(pick(rng));
  return up_closure(f);
}

std::function<void(const std::function<void(std::string, SetFamily)>&)> sweep_families(const SweepSource& s) {
  const int modes = has_family(s.family) + s.all_monotone + (s.random > 0);
  if (modes != 1) throw UsageError("give exactly one of --family/--spec, --all-monotone, --random");
  if (has_family(s.family)) {
    const Loaded l = load_family(s.family);
    SetFamily f = need_dense(l);
    return [f](const auto& emit) { emit("0", f); };
  }
  if (s.all_monotone) {
    if (s.n > 6) throw UsageError("--all-monotone needs n <= 6");
    const unsigned n = s.n;
    return [n](const auto& emit) {
      std::uint64_t i = 0;
      enumerate_monotone(n, [&](const SetFamily& f) { emit(std::to_string(i++), f); });
    };
  }
  if (s.max_n < 1 || s.max_n > 20) throw UsageError("--max-n must be in [1,20]");
  const SweepSource copy = s;
  return [copy](const auto& emit) {
    std::mt19937_64 rng(copy.seed);
    std::uniform_int_distribution<unsigned> size(1, copy.max_n);
    for (unsigned i = 0; i < copy.random; ++i) {
      const unsigned n = size(rng);
      emit(std::to_string(i), random_monotone(n, rng));
    }
  };
}

const std::vector<std::string> kSweepColumns = {"family_id", "p_num", "p_den", "mu", "total_influence", "iso_slack", "log_p_mu"};

void write_csv_row(std::ostream& out, const SweepRow& r) {
  out << r.family_id << "," << r.p.get_num().get_str() << "," << r.p.get_den().get_str() << "," << to_string(r.iso.mu) << ","
      << to_string(r.iso.total_influence) << "," << (r.iso.check ? r.iso.check->slack : "") << "," << r.log_p_mu << "\n";
}

Json row_json(const SweepRow& r) {
  Json j = {{"family_id", r.family_id},
            {"p", to_string(r.p)},
            {"status", iso_status(r.iso.status)},
            {"mu", to_string(r.iso.mu)},
            {"total_influence", to_string(r.iso.total_influence)}};
  if (r.iso.check) {
    j["iso_slack"] = r.iso.check->slack;
    j["holds"] = r.iso.check->holds;
    if (r.iso.equality) j["equality"] = true;
  }
  if (!r.iso.reason.empty()) j["reason"] = r.iso.reason;
  if (!r.log_p_mu.empty()) j["log_p_mu"] = r.log_p_mu;
  if (r.iso.increasing_subcube) j["increasing_subcube"] = true;
  if (!r.iso.consistent) j["consistent"] = false;
  return j;
}

int cmd_iso_sweep(const Context& cx, const SweepSource& s, const std::vector<std::string>& ps) {
  const auto grid = rational_args(ps, "--p");
  if (grid.empty()) throw UsageError("--p is required");
  for (const auto& p : grid) check_probability(p, false);
  const auto source = sweep_families(s);
  if (cx.g.csv) cx.csv_header(kSweepColumns);
  Json rows = Json::array();
  std::uint64_t families = 0, checked = 0, vacuous = 0, skipped = 0, failures = 0, equality = 0, inconsistent = 0;
  std::optional<Rational> min_slack;
  bool equality_on_subcubes_only = true;
  for_each_batch(source, [&](auto& batch) {
    std::vector<SweepRow> out(batch.size() * grid.size());
    parallel_for(out.size(), cx.g.threads, [&](std::size_t i) {
      const auto& [id, f] = batch[i / grid.size()];
      out[i] = sweep_row(id, f, grid[i % grid.size()], cx.tol);
    });
    families += batch.size();
    for (const auto& r : out) {
      if (r.iso.status == IsoStatus::vacuous) ++vacuous;
      if (r.iso.status == IsoStatus::skipped) ++skipped;
      if (r.iso.check) {
        ++checked;
        if (!r.iso.check->holds) ++failures;
        const Rational sl = parse_decimal(r.iso.check->slack);
        if (!min_slack || sl < *min_slack) min_slack = sl;
        if (r.iso.equality) {
          ++equality;
          if (r.iso.increasing && !r.iso.increasing_subcube) equality_on_subcubes_only = false;
        }
      }
      if (!r.iso.consistent) ++inconsistent;
      if (cx.g.csv) write_csv_row(*cx.out, r);
      else rows.push_back(row_json(r));
    }
  });
  const bool ok = failures == 0 && inconsistent == 0;
  if (cx.g.csv) {
    *cx.out << "# summary: families=" << families << " checked=" << checked << " failures=" << failures
            << " inconsistent=" << inconsistent << "\n";
    return ok ? exit_ok : exit_check_failed;
  }
  Json summary = {{"families", families},
                  {"rows", families * grid.size()},
                  {"checked", checked},
                  {"vacuous", vacuous},
                  {"skipped", skipped},
                  {"failures", failures},
                  {"equality_rows", equality},
                  {"equality_only_on_increasing_subcubes", equality_on_subcubes_only},
                  {"inconsistent", inconsistent}};
  if (min_slack) summary["min_slack"] = to_string(*min_slack);
  cx.emit({{"summary", std::move(summary)}, {"rows", std::move(rows)}});
  return ok ? exit_ok : exit_check_failed;
}

int cmd_russo_sweep(const Context& cx, const SweepSource& s, const std::vector<std::string>& ps) {
  const auto grid = rational_args(ps, "--p");
  for (const auto& p : grid) check_probability(p, false);
  const auto source = sweep_families(s);
  if (cx.g.csv) cx.csv_header(kSweepColumns);
  Json rows = Json::array();
  std::uint64_t families = 0, failures = 0;
  for_each_batch(source, [&](auto& batch) {
    std::vector<RussoCheck> checks(batch.size());
    std::vector<SweepRow> evals(batch.size() * grid.size());
    parallel_for(batch.size(), cx.g.threads, [&](std::size_t i) {
      checks[i] = russo_identity(batch[i].second);
      for (std::size_t j = 0; j < grid.size(); ++j) evals[i * grid.size() + j] = sweep_row(batch[i].first, batch[i].second, grid[j], cx.tol);
    });
    for (std::size_t i = 0; i < batch.size(); ++i) {
      ++families;
      if (!checks[i].holds) ++failures;
      if (cx.g.csv) {
        for (std::size_t j = 0; j < grid.size(); ++j) write_csv_row(*cx.out, evals[i * grid.size() + j]);
        continue;
      }
      Json row = {{"family_id", batch[i].first}, {"n", batch[i].second.n()}, {"holds", checks[i].holds}};
      if (!checks[i].holds || batch.size() == 1) {
        row["derivative"] = checks[i].derivative.str();
        row["total_influence"] = checks[i].total_influence.str();
      }
      rows.push_back(std::move(row));
    }
  });
  if (cx.g.csv) {
    *cx.out << "# summary: families=" << families << " russo_failures=" << failures << "\n";
  } else {
    cx.emit({{"summary", {{"families", families}, {"failures", failures}}}, {"rows", std::move(rows)}});
  }
  return failures == 0 ? exit_ok : exit_check_failed;
}

// ---- construct / verify / tightness -------------------------------------------

int cmd_construct(const Context& cx, const std::string& spec_text, const std::vector<std::string>& ps, bool members) {
  FamilySource src;
  src.spec = spec_text;
  if (spec_text.empty()) throw UsageError("--spec is required");
  const Loaded l = load_family(src);
  const FamilySpec spec = parse_family_spec(l.source);
  Json res = {{"spec", l.source}};
  bool ok = true;
  if (l.dense) res["dense_size"] = l.dense->size();
  if (l.uniform) res["uniform_size"] = l.uniform->size();
  if (has_closed_form_size(spec.name) && l.uniform) {
    const BigInt cf = closed_form_size(spec);
    res["closed_form_size"] = to_string(cf);
    ok &= cf == BigInt(static_cast<unsigned long>(l.uniform->size()));
  }
  Json vals = Json::array();
  for (const Rational& p : rational_args(ps, "--p")) {
    check_probability(p, false);
    Json v = {{"p", to_string(p)}};
    if (l.dense) v["mu"] = to_string(mu(*l.dense, p));
    if (has_closed_form_mu(spec.name)) {
      const Rational cf = closed_form_mu(spec, p);
      v["closed_form_mu"] = to_string(cf);
      if (l.dense) {
        v["match"] = cf == mu(*l.dense, p);
        ok &= cf == mu(*l.dense, p);
      }
    }
    vals.push_back(std::move(v));
  }
  if (!vals.empty()) res["values"] = std::move(vals);
  if (members) {
    if (l.graph) res["family"] = to_json(*l.graph);
    else if (l.uniform) res["family"] = to_json(*l.uniform);
    else res["family"] = to_json(*l.dense);
  }
  cx.emit(std::move(res));
  return ok ? exit_ok : exit_check_failed;
}

struct VerifyArgs {
  std::string theorem, case_json;
  std::string p, p0, eps, C, c, delta0, delta;
  std::optional<unsigned> t, s, i, d, n0;
  bool t_replaced = false;
};

int cmd_verify(const Context& cx, const FamilySource& src, const VerifyArgs& a) {
  TheoremCase tc;
  if (!a.case_json.empty()) {
    try {
      tc = parse_theorem_case(Json::parse(a.case_json));
    } catch (const Json::exception& e) {
      throw UsageError(std::string("--case: ") + e.what());
    }
  } else if (a.theorem.empty()) {
    throw UsageError("--theorem or --case is required");
  }
  if (!a.theorem.empty()) tc.id = theorem_arg(a.theorem);
  if (!a.p.empty()) tc.p = rational_arg(a.p, "--p");
  if (!a.p0.empty()) tc.p0 = rational_arg(a.p0, "--p0");
  if (!a.eps.empty()) tc.eps = rational_arg(a.eps, "--eps");
  if (!a.C.empty()) tc.C = rational_arg(a.C, "--C");
  if (!a.c.empty()) tc.c = rational_arg(a.c, "--c");
  if (!a.delta0.empty()) tc.delta0 = rational_arg(a.delta0, "--delta0");
  if (!a.delta.empty()) tc.delta = rational_arg(a.delta, "--delta");
  if (a.t && a.s) throw UsageError("give --t or --s, not both");
  if (a.t) tc.t = *a.t;
  if (a.s) tc.t = *a.s;
  if (a.i) tc.i = *a.i;
  if (a.d) tc.d = *a.d;
  if (a.n0) tc.n0 = *a.n0;
  if (a.t_replaced) tc.t_replaced = true;

  const Loaded l = load_family(src);
  TheoremFamily fam = SetFamily(0);
  switch (tc.id) {
    case TheoremId::wilson_uniform:
    case TheoremId::matching_uniform: fam = need_uniform(l); break;
    case TheoremId::triangle_biased:
    case TheoremId::triangle_uniform:
      if (!l.graph) throw UsageError("this theorem needs a graph family");
      fam = *l.graph;
      break;
    default: fam = need_dense(l);
  }
  const VerdictReport r = check_theorem(tc, fam, cx.tol);
  cx.emit({{"family", l.source}, {"report", r.to_json()}});
  return r.status == Status::violated ? exit_check_failed : exit_ok;
}

int cmd_tightness(const Context& cx, const std::string& spec_text, const std::string& p_text) {
  if (spec_text.empty()) throw UsageError("--spec is required");
  Json j;
  try {
    j = Json::parse(spec_text);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("--spec: ") + e.what());
  }
  const Rational p = rational_arg(p_text, "--p");
  const VerdictReport r = tightness_report(parse_family_spec(j), p, cx.tol);
  cx.emit({{"report", r.to_json()}});
  return r.status == Status::holds ? exit_ok : exit_check_failed;
}

// ---- search / conjecture-scan --------------------------------------------------

struct SearchArgs {
  std::string predicate = "intersecting";
  std::optional<unsigned> t, s, k;
  unsigned n = 0;
  std::string objective = "size";
  std::string p;
  bool shifted = false;
  std::uint64_t node_limit = 0;
  double time_limit = 0;
  std::string checkpoint;
  bool resume = false;
  unsigned split_depth = 0;
};

int cmd_search(const Context& cx, const SearchArgs& a) {
  SearchProblem pr;
  pr.n = a.n;
  pr.k = a.k;
  try {
    pr.predicate = parse_predicate(a.predicate);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.t && a.s) throw UsageError("give --t or --s, not both");
  if (pr.predicate == Predicate::matching_at_most && a.t) throw UsageError("matching takes --s");
  if (pr.predicate != Predicate::matching_at_most && a.s) throw UsageError("--s is for the matching predicate");
  pr.param = a.t ? *a.t : a.s ? *a.s : 1;
  if (pr.predicate == Predicate::intersecting && pr.param != 1) throw UsageError("intersecting means t = 1");
  if (a.objective == "mu") {
    pr.objective = Objective::mu_p;
    if (a.p.empty()) throw UsageError("--objective mu needs --p");
    pr.p = rational_arg(a.p, "--p");
  } else if (a.objective != "size") {
    throw UsageError("--objective must be size or mu");
  }
  pr.node_limit = a.node_limit;
  pr.time_limit_s = a.time_limit;
  SearchOptions o;
  o.threads = cx.g.threads;
  o.shifted = a.shifted;
  o.checkpoint_path = a.checkpoint;
  o.resume = a.resume;
  o.split_depth = a.split_depth;
  const SearchCertificate c = max_uniform(pr, o);
  cx.emit(c.to_json(cx.g.stats));
  return c.verified ? exit_ok : exit_check_failed;
}

struct ScanArgs {
  std::string conjecture;
  std::vector<unsigned> n, k, t, s, d;
  std::vector<std::string> p;
  std::uint64_t node_limit = 0;
};

int cmd_scan(const Context& cx, const ScanArgs& a) {
  const ConjectureId id = conjecture_arg(a.conjecture);
  ScanRanges r;
  r.n = a.n;
  r.k = a.k;
  r.d = a.d;
  r.p = rational_args(a.p, "--p");
  r.node_limit = a.node_limit;
  r.threads = cx.g.threads;
  if (id == ConjectureId::emc_stability) {
    if (!a.t.empty()) throw UsageError("EMCStability takes --s");
    r.t = a.s;
  } else {
    if (!a.s.empty()) throw UsageError("this conjecture takes --t");
    r.t = a.t;
  }
  if (r.n.empty() || r.t.empty()) throw UsageError("--n and --t/--s are required");
  if (id == ConjectureId::t_intersecting_sharp && r.p.empty()) throw UsageError("--p is required");
  if (id != ConjectureId::t_intersecting_sharp && (r.k.empty() || r.d.empty())) throw UsageError("--k and --d are required");
  const ScanReport rep = conjecture_scan(id, r, cx.tol);
  cx.emit(rep.to_json());
  return rep.candidates.empty() ? exit_ok : exit_check_failed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact biased-measure EKR stability toolkit", "ekrlab"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--threads", g.threads, "worker threads (default: all cores)");
  app.add_option("--tau", g.tau, "comparison tolerance as num/den")->capture_default_str();
  app.add_flag("--csv", g.csv, "CSV output for sweeps");
  app.add_flag("--stats", g.stats, "include search statistics");
  app.set_version_flag("--version", kVersion);

  FamilySource fam;
  std::vector<std::string> ps;
  auto* measure = app.add_subcommand("measure", "mu_p(F) and its polynomial");
  add_family_options(measure, fam);
  measure->add_option("--p", ps, "bias values num/den");

  auto* infl = app.add_subcommand("influence", "influences at each p");
  add_family_options(infl, fam);
  infl->add_option("--p", ps, "bias values num/den");

  unsigned shadow_s = 1;
  bool upper = false;
  auto* shadow = app.add_subcommand("shadow", "lower/upper shadow with the Kruskal-Katona bound");
  add_family_options(shadow, fam);
  shadow->add_option("--s", shadow_s, "shadow depth")->capture_default_str();
  shadow->add_flag("--upper", upper, "upper shadow");

  SweepSource sweep;
  auto add_sweep = [&](CLI::App* sub) {
    add_family_options(sub, sweep.family);
    sub->add_option("--n", sweep.n, "ground size for --all-monotone");
    sub->add_flag("--all-monotone", sweep.all_monotone, "every increasing family on [n]");
    sub->add_option("--p", ps, "bias values num/den");
  };
  auto* iso = app.add_subcommand("iso-sweep", "skewed edge-isoperimetric slack");
  add_sweep(iso);
  auto* russo = app.add_subcommand("russo-sweep", "Russo identity d/dp mu_p = I_p");
  add_sweep(russo);
  russo->add_option("--random", sweep.random, "random increasing families");
  russo->add_option("--max-n", sweep.max_n, "largest ground size for --random")->capture_default_str();
  russo->add_option("--seed", sweep.seed, "seed for --random")->capture_default_str();

  std::string spec_text;
  bool with_members = false;
  auto* construct_cmd = app.add_subcommand("construct", "build a zoo family");
  construct_cmd->add_option("--spec", spec_text, "zoo family spec (JSON)");
  construct_cmd->add_option("--p", ps, "bias values num/den");
  construct_cmd->add_flag("--members", with_members, "print the members");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "check a stability theorem on a family");
  verify->add_option("--theorem", va.theorem, "theorem name");
  verify->add_option("--case", va.case_json, "theorem case (JSON)");
  add_family_options(verify, fam);
  verify->add_option("--p", va.p);
  verify->add_option("--p0", va.p0);
  verify->add_option("--eps", va.eps);
  verify->add_option("--t", va.t);
  verify->add_option("--s", va.s);
  verify->add_option("--i", va.i);
  verify->add_option("--d", va.d);
  verify->add_option("--C", va.C, "large constant of Condition0");
  verify->add_option("--c", va.c, "small constant of Condition0");
  verify->add_option("--delta0", va.delta0);
  verify->add_option("--delta", va.delta);
  verify->add_option("--n0", va.n0);
  verify->add_flag("--t-replaced", va.t_replaced, "use t in place of 2^t - 1");

  std::string tight_p;
  auto* tight = app.add_subcommand("tightness", "equalities for a tightness family");
  tight->add_option("--spec", spec_text, "zoo family spec (JSON)");
  tight->add_option("--p", tight_p, "bias num/den")->required();

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "exact extremal search");
  search->add_option("--predicate", sa.predicate, "intersecting | t-intersecting | matching")->capture_default_str();
  search->add_option("--t", sa.t);
  search->add_option("--s", sa.s);
  search->add_option("--n", sa.n)->required();
  search->add_option("--k", sa.k, "uniformity; absent: all of P([n])");
  search->add_option("--objective", sa.objective, "size | mu")->capture_default_str();
  search->add_option("--p", sa.p);
  search->add_flag("--shifted", sa.shifted, "restrict to shifted families");
  search->add_option("--node-limit", sa.node_limit);
  search->add_option("--time-limit", sa.time_limit, "seconds");
  search->add_option("--checkpoint", sa.checkpoint);
  search->add_flag("--resume", sa.resume);
  search->add_option("--split-depth", sa.split_depth);

  ScanArgs sc;
  auto* scan = app.add_subcommand("conjecture-scan", "search for counterexamples to a conjecture");
  scan->add_option("--conjecture", sc.conjecture, "TIntersectingSharp | WilsonSharp | EMCStability")->required();
  scan->add_option("--n", sc.n);
  scan->add_option("--k", sc.k);
  scan->add_option("--t", sc.t);
  scan->add_option("--s", sc.s);
  scan->add_option("--d", sc.d);
  scan->add_option("--p", sc.p);
  scan->add_option("--node-limit", sc.node_limit, "per tuple");

  unsigned katona_t = 1;
  std::string katona_p;
  auto* katona = app.add_subcommand("katona", "Katona shadow bound for t-intersecting families");
  add_family_options(katona, fam);
  katona->add_option("--t", katona_t)->capture_default_str();
  katona->add_option("--p", katona_p, "biased variant at this p");

  std::string kk_m;
  unsigned kk_k = 0, kk_s = 1;
  std::optional<unsigned> kk_n;
  auto* kk = app.add_subcommand("kk", "Kruskal-Katona minimum shadow");
  kk->add_option("--m", kk_m)->required();
  kk->add_option("--k", kk_k)->required();
  kk->add_option("--s", kk_s)->capture_default_str();
  kk->add_option("--n", kk_n, "also the upper shadow and segment checks");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (!app.get_subcommands().empty()) err << "run with --help for usage\n";
    return exit_usage;
  }

  CLI::App* sub = app.get_subcommands().front();
  Context cx;
  cx.subcommand = sub->get_name();
  cx.g = g;
  cx.out = &out;
  cx.err = &err;
  try {
    cx.tol.tau = rational_arg(g.tau, "--tau");
    if (cx.tol.tau < 0) throw UsageError("--tau must be nonnegative");
    if (g.csv && sub != iso && sub != russo) throw UsageError("--csv applies to iso-sweep and russo-sweep");
    cx.inputs = recorded_inputs(sub);
    if (cx.tol.tau != Tolerance{}.tau) cx.inputs["tau"] = to_string(cx.tol.tau);

    if (sub == measure) return cmd_measure(cx, fam, ps);
    if (sub == infl) return cmd_influence(cx, fam, ps);
    if (sub == shadow) return cmd_shadow(cx, fam, shadow_s, upper);
    if (sub == iso) return cmd_iso_sweep(cx, sweep, ps);
    if (sub == russo) return cmd_russo_sweep(cx, sweep, ps);
    if (sub == construct_cmd) return cmd_construct(cx, spec_text, ps, with_members);
    if (sub == verify) return cmd_verify(cx, fam, va);
    if (sub == tight) return cmd_tightness(cx, spec_text, tight_p);
    if (sub == search) return cmd_search(cx, sa);
    if (sub == scan) return cmd_scan(cx, sc);
    if (sub == katona) return cmd_katona(cx, fam, katona_t, katona_p);
    if (sub == kk) return cmd_kk(cx, kk_m, kk_k, kk_s, kk_n);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::runtime_error& e) {
    // unreadable files and the like
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace ekrlab
