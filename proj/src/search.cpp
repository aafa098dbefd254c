#include "ekrlab/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ekrlab/family_io.hpp"
#include "ekrlab/measure.hpp"
#include "ekrlab/polynomial.hpp"

namespace ekrlab {

// ---------------------------------------------------------------- monotone

std::vector<std::uint32_t> monotone_tables(unsigned n) {
  if (n > 5) throw std::invalid_argument("monotone_tables: n must be <= 5");
  std::vector<std::uint32_t> cur{0u, 1u};  // n = 0: {} and {∅}
  for (unsigned m = 1; m <= n; ++m) {
    const unsigned half = 1u << (m - 1);
    std::vector<std::uint32_t> next;
    for (std::uint32_t f1 : cur)
      for (std::uint32_t f0 : cur)
        if ((f0 & ~f1) == 0) next.push_back(f0 | (f1 << half));
    std::sort(next.begin(), next.end());
    cur = std::move(next);
  }
  return cur;
}

void enumerate_monotone(unsigned n, const std::function<void(const SetFamily&)>& fn) {
  if (n > 6) throw std::invalid_argument("enumerate_monotone: n must be <= 6 (7,828,354 families at n = 6)");
  if (n <= 5) {
    for (std::uint32_t t : monotone_tables(n)) fn(SetFamily::from_words(n, {static_cast<Word>(t)}));
    return;
  }
  const auto prev = monotone_tables(5);
  for (std::uint32_t f1 : prev)
    for (std::uint32_t f0 : prev)
      if ((f0 & ~f1) == 0) fn(SetFamily::from_words(6, {static_cast<Word>(f0) | (static_cast<Word>(f1) << 32)}));
}

std::uint64_t count_monotone(unsigned n) {
  if (n > 6) throw std::invalid_argument("count_monotone: n must be <= 6");
  if (n <= 5) return monotone_tables(n).size();
  const auto prev = monotone_tables(5);
  std::uint64_t c = 0;
  for (std::uint32_t f1 : prev)
    for (std::uint32_t f0 : prev) c += (f0 & ~f1) == 0;
  return c;
}

// ---------------------------------------------------------------- problems

const char* predicate_name(Predicate p) {
  switch (p) {
    case Predicate::intersecting: return "intersecting";
    case Predicate::t_intersecting: return "t-intersecting";
    case Predicate::matching_at_most: return "matching-at-most";
  }
  return "?";
}

Predicate parse_predicate(const std::string& name) {
  if (name == "intersecting") return Predicate::intersecting;
  if (name == "t-intersecting" || name == "t_intersecting") return Predicate::t_intersecting;
  if (name == "matching-at-most" || name == "matching_at_most" || name == "matching") return Predicate::matching_at_most;
  throw std::invalid_argument("unknown predicate '" + name + "'");
}

Json to_json(const SearchProblem& pr) {
  Json j;
  j["n"] = pr.n;
  if (pr.k) j["k"] = *pr.k;
  j["predicate"] = predicate_name(pr.predicate);
  j["param"] = pr.param;
  j["objective"] = pr.objective == Objective::cardinality ? "cardinality" : "mu_p";
  if (pr.objective == Objective::mu_p) j["p"] = to_string(pr.p);
  if (pr.node_limit) j["node_limit"] = pr.node_limit;
  if (pr.time_limit_s > 0) j["time_limit_s"] = pr.time_limit_s;
  return j;
}

SearchProblem parse_search_problem(const Json& j) {
  SearchProblem pr;
  pr.n = j.at("n").get<unsigned>();
  if (j.contains("k")) pr.k = j.at("k").get<unsigned>();
  pr.predicate = parse_predicate(j.at("predicate").get<std::string>());
  pr.param = j.value("param", 1u);
  const std::string obj = j.value("objective", std::string("cardinality"));
  if (obj == "mu_p") {
    pr.objective = Objective::mu_p;
    pr.p = parse_rational(j.at("p").get<std::string>());
  } else if (obj != "cardinality") {
    throw std::invalid_argument("unknown objective '" + obj + "'");
  }
  pr.node_limit = j.value("node_limit", std::uint64_t{0});
  pr.time_limit_s = j.value("time_limit_s", 0.0);
  return pr;
}

bool satisfies(Predicate pred, unsigned param, std::span<const Mask> members) {
  switch (pred) {
    case Predicate::intersecting: return is_t_intersecting(members, 1);
    case Predicate::t_intersecting: return is_t_intersecting(members, param);
    case Predicate::matching_at_most: return matching_number(members) <= param;
  }
  return false;
}

namespace {

using Bits = std::uint64_t;

inline Bits bit(unsigned i) { return Bits{1} << i; }
inline unsigned lowest(Bits b) { return static_cast<unsigned>(__builtin_ctzll(b)); }

std::vector<Mask> candidate_sets(unsigned n, std::optional<unsigned> k) {
  std::vector<Mask> c;
  if (k) {
    if (*k > n) return c;
    if (binom(n, *k) > 64) throw std::invalid_argument("search: more than 64 candidate sets (C(n,k) > 64)");
    if (*k == 0) return {0};
    Mask x = prefix_mask(*k);
    const Mask end = n >= 64 ? 0 : Mask{1} << n;
    while (true) {
      c.push_back(x);
      const Mask lo = x & (~x + 1), hi = x + lo;
      x = hi | (((x ^ hi) >> 2) / lo);
      if (end != 0 && x >= end) break;
      if (hi == 0) break;
    }
  } else {
    if (n > 6) throw std::invalid_argument("search: the whole cube needs n <= 6");
    for (Mask x = 0; x < (Mask{1} << n); ++x) c.push_back(x);
  }
  std::sort(c.begin(), c.end(), lex_less);
  return c;
}

// y sits above x in the shift order: same size, i-th element of y >= i-th of x.
bool shift_above(Mask x, Mask y) {
  if (popcount(x) != popcount(y)) return false;
  while (x) {
    const Mask ex = x & (~x + 1), ey = y & (~y + 1);
    if (ey < ex) return false;
    x ^= ex;
    y ^= ey;
  }
  return true;
}

/// Shared candidate structure for the branch and bound and the maximal
/// enumeration.
struct Ground {
  std::vector<Mask> cand;
  unsigned size() const { return static_cast<unsigned>(cand.size()); }
  Predicate pred = Predicate::intersecting;
  unsigned param = 1;
  std::vector<Bits> compat;    // pairwise predicates: j compatible with i
  std::vector<Bits> disjoint;  // matching predicate
  std::vector<Bits> shift_pred;
  std::vector<Bits> shift_up;
  Bits self_ok = 0;

  Ground(unsigned n, std::optional<unsigned> k, Predicate p, unsigned prm) : cand(candidate_sets(n, k)), pred(p), param(prm) {
    const unsigned N = size();
    const unsigned t = pred == Predicate::intersecting ? 1 : param;
    compat.assign(N, 0);
    disjoint.assign(N, 0);
    for (unsigned i = 0; i < N; ++i)
      for (unsigned j = 0; j < N; ++j) {
        if (popcount(cand[i] & cand[j]) >= t) compat[i] |= bit(j);
        if ((cand[i] & cand[j]) == 0) disjoint[i] |= bit(j);
      }
    for (unsigned i = 0; i < N; ++i) {
      const bool ok = pairwise() ? (compat[i] >> i & 1u) != 0 : param >= 1;
      if (ok) self_ok |= bit(i);
    }
  }

  bool pairwise() const { return pred != Predicate::matching_at_most; }

  void build_shift() {
    const unsigned N = size();
    shift_pred.assign(N, 0);
    shift_up.assign(N, 0);
    auto find = [&](Mask m) -> int {
      for (unsigned i = 0; i < N; ++i)
        if (cand[i] == m) return static_cast<int>(i);
      return -1;
    };
    for (unsigned i = 0; i < N; ++i) {
      const Mask a = cand[i];
      for (unsigned e = 1; e < 64; ++e) {
        if (!(a >> e & 1u) || (a >> (e - 1) & 1u)) continue;
        const int j = find(a ^ (Mask{1} << e) ^ (Mask{1} << (e - 1)));
        if (j >= 0) shift_pred[i] |= bit(static_cast<unsigned>(j));
      }
      for (unsigned j = 0; j < N; ++j)
        if (j != i && shift_above(a, cand[j])) shift_up[i] |= bit(j);
    }
  }

  /// Some r pairwise disjoint members inside `pool`.
  bool has_matching(Bits pool, unsigned r) const {
    if (r == 0) return true;
    if (static_cast<unsigned>(__builtin_popcountll(pool)) < r) return false;
    while (pool) {
      const unsigned v = lowest(pool);
      pool &= pool - 1;
      if (has_matching(pool & disjoint[v], r - 1)) return true;
    }
    return false;
  }

  /// Adding candidate x to `included` keeps the predicate.
  bool addable(Bits included, unsigned x) const {
    if (!(self_ok >> x & 1u)) return false;
    if (pairwise()) return (included & ~compat[x]) == 0;
    if (cand[x] == 0) return !has_matching(included, param);  // ∅ is disjoint from everything
    return !has_matching(included & disjoint[x], param);
  }
};

struct TaskResult {
  bool done = false;
  bool has = false;
  std::uint64_t value = 0;
  Bits family = 0;
};

struct State {
  Bits included = 0;
  Bits allowed = 0;  // candidates still includable, decided or not
  std::uint64_t value = 0;
};

class BranchAndBound {
 public:
  BranchAndBound(const SearchProblem& pr, const SearchOptions& opt)
      : pr_(pr), opt_(opt), g_(pr.n, pr.k, pr.predicate, pr.param) {
    if (opt.shifted) g_.build_shift();
    const unsigned N = g_.size();
    weight_.assign(N, 1);
    if (pr.objective == Objective::mu_p) {
      check_probability(pr.p, false);
      const BigInt a = pr.p.get_num(), b = pr.p.get_den(), c = b - a;
      BigInt scale;
      mpz_pow_ui(scale.get_mpz_t(), b.get_mpz_t(), pr.n);
      if (scale > BigInt(1) << 62) throw std::invalid_argument("search: denominator of p too large for the mu_p objective");
      scale_ = Rational(scale);
      for (unsigned i = 0; i < N; ++i) {
        BigInt w, x;
        mpz_pow_ui(w.get_mpz_t(), a.get_mpz_t(), popcount(g_.cand[i]));
        mpz_pow_ui(x.get_mpz_t(), c.get_mpz_t(), pr.n - popcount(g_.cand[i]));
        w *= x;
        weight_[i] = w.get_ui();
      }
    }
    if (opt.threads > 1 || !opt.checkpoint_path.empty())
      depth_ = std::min(N, opt.split_depth ? opt.split_depth : 8u);
    else
      depth_ = std::min(N, opt.split_depth);
    start_ = std::chrono::steady_clock::now();
  }

  SearchCertificate run() {
    std::vector<State> tasks;
    make_tasks(State{0, g_.self_ok, 0}, 0, tasks);
    std::vector<TaskResult> results(tasks.size());
    SearchStats stats;
    stats.tasks = tasks.size();
    if (opt_.resume) stats.tasks_resumed = load_checkpoint(results);
    for (const auto& r : results)
      if (r.done && r.has) raise_global(r.value);

    std::atomic<std::size_t> next{0};
    std::mutex mu;
    auto worker = [&] {
      SearchStats local;
      while (!stop_.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) break;
        if (results[i].done) continue;
        TaskResult res;
        dfs(tasks[i], depth_, res, local);
        if (stop_.load()) break;  // partial: not recorded as done
        res.done = true;
        std::lock_guard<std::mutex> lock(mu);
        results[i] = res;
        if (!opt_.checkpoint_path.empty()) save_checkpoint(results);
      }
      std::lock_guard<std::mutex> lock(mu);
      stats.nodes += local.nodes;
      stats.pruned_bound += local.pruned_bound;
      stats.pruned_predicate += local.pruned_predicate;
      stats.pruned_shift += local.pruned_shift;
    };
    const unsigned nt = std::max(1u, opt_.threads);
    if (nt == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned i = 0; i < nt; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }

    SearchCertificate cert;
    cert.problem = pr_;
    cert.shifted = opt_.shifted;
    cert.complete = std::all_of(results.begin(), results.end(), [](const TaskResult& r) { return r.done; });
    // Lowest task index wins ties: tasks are in include-first order.
    const TaskResult* best = nullptr;
    for (const auto& r : results)
      if (r.has && (!best || r.value > best->value)) best = &r;
    TaskResult fallback;
    if (!cert.complete) {
      std::lock_guard<std::mutex> lock(partial_mu_);
      if (partial_best_.has && (!best || partial_best_.value > best->value)) {
        fallback = partial_best_;
        best = &fallback;
      }
    }
    if (best) {
      for (Bits b = best->family; b; b &= b - 1) cert.witness.push_back(g_.cand[lowest(b)]);
      std::sort(cert.witness.begin(), cert.witness.end());
      cert.value = Rational(BigInt(static_cast<unsigned long>(best->value))) / scale_;
      cert.value.canonicalize();
    }
    cert.stats = stats;
    cert.verified = verify(cert);
    if (opt_.shifted)
      cert.reduction =
          "(i,j)-compressions keep |F| and mu_p(F), keep t-intersection and never raise the matching number, so an "
          "optimum is attained by a shifted family";
    return cert;
  }

 private:
  void make_tasks(State s, unsigned idx, std::vector<State>& out) {
    if (idx == depth_) {
      out.push_back(s);
      return;
    }
    State in;
    if (try_include(s, idx, in, nullptr)) make_tasks(in, idx + 1, out);
    make_tasks(exclude(s, idx), idx + 1, out);
  }

  bool try_include(const State& s, unsigned x, State& out, SearchStats* st) const {
    if (!(s.allowed >> x & 1u)) {
      if (st) ++st->pruned_predicate;
      return false;
    }
    if (opt_.shifted && (g_.shift_pred[x] & ~s.included) != 0) {
      if (st) ++st->pruned_shift;
      return false;
    }
    if (!g_.pairwise() && !g_.addable(s.included, x)) {
      if (st) ++st->pruned_predicate;
      return false;
    }
    out = s;
    out.included |= bit(x);
    out.value += weight_[x];
    if (g_.pairwise()) {
      out.allowed &= g_.compat[x];
    } else {
      // Lazily drop undecided candidates that can no longer join.
      const Bits later = s.allowed & ~((bit(x) << 1) - 1);
      for (Bits b = later; b; b &= b - 1) {
        const unsigned y = lowest(b);
        if (!g_.addable(out.included, y)) out.allowed &= ~bit(y);
      }
    }
    return true;
  }

  State exclude(const State& s, unsigned x) const {
    State out = s;
    out.allowed &= ~bit(x);
    if (opt_.shifted) out.allowed &= ~g_.shift_up[x];
    return out;
  }

  std::uint64_t bound(const State& s, unsigned idx) const {
    Bits pool = idx >= 64 ? 0 : s.allowed & ~(bit(idx) - 1);
    std::uint64_t b = 0;
    if (!g_.pairwise()) {
      for (Bits q = pool; q; q &= q - 1) b += weight_[lowest(q)];
      return b;
    }
    // Greedy colouring into mutually incompatible classes; a valid family
    // takes at most one member per class.
    while (pool) {
      Bits q = pool;
      std::uint64_t mx = 0;
      while (q) {
        const unsigned v = lowest(q);
        mx = std::max(mx, weight_[v]);
        pool &= ~bit(v);
        q &= ~g_.compat[v] & ~bit(v);
        q &= pool;
      }
      b += mx;
    }
    return b;
  }

  void dfs(const State& s, unsigned idx, TaskResult& res, SearchStats& st) {
    if (stop_.load(std::memory_order_relaxed)) return;
    ++st.nodes;
    if (over_budget(st.nodes)) {
      stop_.store(true);
      return;
    }
    const unsigned N = g_.size();
    const Bits undecided = idx >= 64 ? 0 : s.allowed & ~(bit(idx) - 1);
    if (idx >= N || undecided == 0) {
      if (!res.has || s.value > res.value) {
        res.has = true;
        res.value = s.value;
        res.family = s.included;
        raise_global(s.value);
        offer_partial(res);
      }
      return;
    }
    const std::uint64_t ub = s.value + bound(s, idx);
    if (ub < global_.load(std::memory_order_relaxed) || (res.has && ub <= res.value)) {
      ++st.pruned_bound;
      return;
    }
    const unsigned x = lowest(undecided);  // skip candidates already ruled out
    State in;
    if (try_include(s, x, in, &st)) dfs(in, x + 1, res, st);
    dfs(exclude(s, x), x + 1, res, st);
  }

  bool over_budget(std::uint64_t local_nodes) {
    if (pr_.node_limit && node_count_.fetch_add(1, std::memory_order_relaxed) + 1 > pr_.node_limit) return true;
    if (pr_.time_limit_s > 0 && (local_nodes & 1023) == 0) {
      const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
      if (el > pr_.time_limit_s) return true;
    }
    return false;
  }

  void raise_global(std::uint64_t v) {
    std::uint64_t cur = global_.load();
    while (v > cur && !global_.compare_exchange_weak(cur, v)) {
    }
  }

  void offer_partial(const TaskResult& r) {
    std::lock_guard<std::mutex> lock(partial_mu_);
    if (!partial_best_.has || r.value > partial_best_.value) partial_best_ = r;
  }

  bool verify(const SearchCertificate& c) const {
    if (!satisfies(pr_.predicate, pr_.param, c.witness)) return false;
    Rational v = 0;
    for (Mask m : c.witness) {
      if (pr_.k && popcount(m) != *pr_.k) return false;
      if (pr_.objective == Objective::cardinality)
        v += 1;
      else
        v += pow(pr_.p, popcount(m)) * pow(1 - pr_.p, pr_.n - popcount(m));
    }
    if (v != c.value) return false;
    if (opt_.shifted && pr_.k) return is_shifted(UniformFamily::from_members(pr_.n, *pr_.k, c.witness));
    return true;
  }

  Json checkpoint_header() const {
    // budgets may change between a run and its resume
    SearchProblem key = pr_;
    key.node_limit = 0;
    key.time_limit_s = 0;
    Json j;
    j["problem"] = to_json(key);
    j["shifted"] = opt_.shifted;
    j["split_depth"] = depth_;
    return j;
  }

  void save_checkpoint(const std::vector<TaskResult>& results) const {
    Json j = checkpoint_header();
    j["tasks"] = results.size();
    Json done = Json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (!results[i].done) continue;
      Json d;
      d["task"] = i;
      d["has"] = results[i].has;
      d["value"] = results[i].value;
      d["family"] = results[i].family;  // bit i = i-th candidate in lex order
      done.push_back(d);
    }
    j["done"] = std::move(done);
    const std::string tmp = opt_.checkpoint_path + ".tmp";
    {
      std::ofstream out(tmp);
      out << j.dump(1) << "\n";
    }
    std::rename(tmp.c_str(), opt_.checkpoint_path.c_str());
  }

  std::uint64_t load_checkpoint(std::vector<TaskResult>& results) const {
    std::ifstream in(opt_.checkpoint_path);
    if (!in) return 0;  // nothing saved yet: fresh start
    Json j = Json::parse(in);
    Json expect = checkpoint_header();
    for (const char* key : {"problem", "shifted", "split_depth"})
      if (j.at(key) != expect.at(key)) throw std::invalid_argument(std::string("checkpoint mismatch in '") + key + "'");
    if (j.at("tasks").get<std::size_t>() != results.size()) throw std::invalid_argument("checkpoint mismatch in 'tasks'");
    std::uint64_t n = 0;
    for (const auto& d : j.at("done")) {
      TaskResult& r = results.at(d.at("task").get<std::size_t>());
      r.done = true;
      r.has = d.at("has").get<bool>();
      r.value = d.at("value").get<std::uint64_t>();
      r.family = d.at("family").get<Bits>();
      ++n;
    }
    return n;
  }

  SearchProblem pr_;
  SearchOptions opt_;
  Ground g_;
  std::vector<std::uint64_t> weight_;
  Rational scale_{1};
  unsigned depth_ = 0;
  std::atomic<std::uint64_t> global_{0};
  std::atomic<bool> stop_{false};
  std::atomic<std::uint64_t> node_count_{0};
  std::chrono::steady_clock::time_point start_;
  std::mutex partial_mu_;
  TaskResult partial_best_;  // best leaf seen anywhere, for budget-cut runs
};

}  // namespace

Json SearchCertificate::to_json(bool with_stats) const {
  Json j;
  j["problem"] = ekrlab::to_json(problem);
  j["shifted"] = shifted;
  j["optimum"] = to_string(value);
  j["complete"] = complete;
  j["verified"] = verified;
  j["witness"] = family_json(problem.n, witness);
  if (!reduction.empty()) j["reduction"] = reduction;
  if (with_stats) {
    Json s;
    s["nodes"] = stats.nodes;
    s["pruned_bound"] = stats.pruned_bound;
    s["pruned_predicate"] = stats.pruned_predicate;
    s["pruned_shift"] = stats.pruned_shift;
    s["tasks"] = stats.tasks;
    s["tasks_resumed"] = stats.tasks_resumed;
    j["stats"] = std::move(s);
  }
  return j;
}

SearchCertificate max_uniform(const SearchProblem& problem, const SearchOptions& options) {
  if (problem.predicate == Predicate::t_intersecting && problem.param == 0)
    throw std::invalid_argument("search: t must be >= 1");
  BranchAndBound bb(problem, options);
  return bb.run();
}

// ---------------------------------------------------------------- maximal

MaximalEnumeration enumerate_maximal(unsigned n, unsigned k, Predicate pred, unsigned param, std::size_t min_size,
                                     const std::function<void(const std::vector<Mask>&)>& fn, std::uint64_t node_limit) {
  Ground g(n, k, pred, param);
  MaximalEnumeration out;
  auto emit = [&](Bits fam) {
    std::vector<Mask> members;
    for (Bits b = fam; b; b &= b - 1) members.push_back(g.cand[lowest(b)]);
    std::sort(members.begin(), members.end());
    ++out.families;
    fn(members);
  };
  auto budget = [&] {
    ++out.nodes;
    if (node_limit && out.nodes > node_limit) out.complete = false;
    return out.complete;
  };

  if (g.pairwise()) {
    // Bron–Kerbosch with pivoting on the compatibility graph.
    auto bk = [&](auto&& self, Bits r, Bits p, Bits x) -> void {
      if (!budget()) return;
      const std::size_t rs = static_cast<std::size_t>(__builtin_popcountll(r));
      if (rs + static_cast<std::size_t>(__builtin_popcountll(p)) < min_size) return;
      if (p == 0) {
        if (x == 0) emit(r);
        return;
      }
      unsigned pivot = lowest(p | x);
      int best = -1;
      for (Bits q = p | x; q; q &= q - 1) {
        const unsigned u = lowest(q);
        const int c = __builtin_popcountll(p & g.compat[u] & ~bit(u));
        if (c > best) {
          best = c;
          pivot = u;
        }
      }
      for (Bits q = p & ~(g.compat[pivot] & ~bit(pivot)); q; q &= q - 1) {
        const unsigned v = lowest(q);
        const Bits nb = g.compat[v] & ~bit(v);
        self(self, r | bit(v), p & nb, x & nb);
        p &= ~bit(v);
        x |= bit(v);
        if (!out.complete) return;
      }
    };
    bk(bk, 0, g.self_ok, 0);
    return out;
  }

  // Matching number bound is not pairwise: plain include/exclude search,
  // maximality checked at the leaves.
  const unsigned N = g.size();
  auto dfs = [&](auto&& self, unsigned idx, Bits inc, Bits open) -> void {
    if (!budget()) return;
    const Bits rest = idx >= 64 ? 0 : open & ~(bit(idx) - 1);
    if (static_cast<std::size_t>(__builtin_popcountll(inc) + __builtin_popcountll(rest)) < min_size) return;
    if (idx >= N || rest == 0) {
      for (unsigned y = 0; y < N; ++y)
        if (!(inc >> y & 1u) && g.addable(inc, y)) return;
      emit(inc);
      return;
    }
    const unsigned x = lowest(rest);
    if (g.addable(inc, x)) {
      const Bits inc2 = inc | bit(x);
      Bits open2 = open;
      for (Bits b = rest & ~bit(x); b; b &= b - 1)
        if (!g.addable(inc2, lowest(b))) open2 &= ~bit(lowest(b));
      self(self, x + 1, inc2, open2);
    }
    // Excluding x only makes sense if something later can block it.
    self(self, x + 1, inc, open & ~bit(x));
  };
  dfs(dfs, 0, 0, g.self_ok);
  return out;
}

// ---------------------------------------------------------------- measure cap

MeasureCapResult extremal_under_measure_cap(unsigned n, const Rational& p0, unsigned t, const Rational& p,
                                            std::optional<Rational> exclude_radius) {
  if (n > 5) throw std::invalid_argument("extremal_under_measure_cap: n must be <= 5");
  check_probability(p0, true);
  check_probability(p, true);
  if (t == 0 || t > n) throw std::invalid_argument("extremal_under_measure_cap: need 1 <= t <= n");
  const unsigned sz = 1u << n;
  // Measures of single points, by size.
  std::vector<Rational> w0(n + 1), w(n + 1);
  for (unsigned j = 0; j <= n; ++j) {
    w0[j] = pow(p0, j) * pow(1 - p0, n - j);
    w[j] = pow(p, j) * pow(1 - p, n - j);
  }
  auto measure = [&](std::uint32_t table, const std::vector<Rational>& wt) {
    std::vector<unsigned> cnt(n + 1, 0);
    for (std::uint32_t b = table; b; b &= b - 1) ++cnt[popcount(static_cast<Mask>(__builtin_ctz(b)))];
    Rational m = 0;
    for (unsigned j = 0; j <= n; ++j)
      if (cnt[j]) m += wt[j] * cnt[j];
    return m;
  };
  std::vector<std::uint32_t> umv;
  for (Mask b = 0; b < sz; ++b) {
    if (popcount(b) != t) continue;
    std::uint32_t tab = 0;
    for (Mask x = 0; x < sz; ++x)
      if ((x & b) == b) tab |= 1u << x;
    umv.push_back(tab);
  }
  const Rational cap = pow(p0, t);
  MeasureCapResult res;
  std::optional<std::uint32_t> best;
  auto members_less = [&](std::uint32_t a, std::uint32_t b) {
    // ascending member lists compared lexicographically
    while (a && b) {
      const unsigned x = static_cast<unsigned>(__builtin_ctz(a)), y = static_cast<unsigned>(__builtin_ctz(b));
      if (x != y) return x < y;
      a &= a - 1;
      b &= b - 1;
    }
    return a == 0 && b != 0;
  };
  for (std::uint32_t tab : monotone_tables(n)) {
    if (measure(tab, w0) > cap) continue;
    if (exclude_radius) {
      bool near = false;
      for (std::uint32_t u : umv)
        if (measure(tab ^ u, w) <= *exclude_radius) {
          near = true;
          break;
        }
      if (near) continue;
    }
    ++res.examined;
    const Rational m = measure(tab, w);
    if (!best || m > res.value || (m == res.value && members_less(tab, *best))) {
      best = tab;
      res.value = m;
    }
  }
  if (best) res.witness = SetFamily::from_words(n, {static_cast<Word>(*best)});
  return res;
}

}  // namespace ekrlab
