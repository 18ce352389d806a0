// Acceptance gate: one [PASS]/[FAIL] line per criterion, nonzero exit on any
// failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/random_network.hpp"
#include "tcn/cli.hpp"
#include "tcn/tcn.hpp"

namespace tcn {
namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

struct CorpusModel {
  std::string name;
  SourceNetwork net;
};

std::vector<CorpusModel> load_corpus() {
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(TCN_CORPUS_DIR)) {
    if (entry.path().extension() == ".tcm") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<CorpusModel> out;
  for (const auto& p : paths) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    auto r = parse_model(ss.str());
    if (!r.ok()) throw std::runtime_error("cannot parse " + p.string());
    out.push_back({p.stem().string(), *r.network});
  }
  return out;
}

std::vector<SourceNetwork> fuzz_corpus(std::size_t n) {
  testing::NetworkGenerator gen(20240601);
  std::vector<SourceNetwork> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(gen.next());
  return out;
}

constexpr std::size_t kFuzzCount = 5000;

Outcome ac1_ac2(bool counts) {
  Outcome o;
  std::size_t checked = 0;
  for (const auto& src : fuzz_corpus(kFuzzCount)) {
    const TcnNetwork t = tcn(src);
    const Verdict v = check_equivalence(src, t, t.original_vars);
    ++checked;
    if (counts ? !v.count_equal : !v.set_equal) {
      o.fail("mismatch on\n" + render_model(src) + dump(t));
      break;
    }
  }
  if (o.ok) o.detail = std::to_string(checked) + " networks";
  return o;
}

Outcome ac3() {
  Outcome o;
  std::size_t n = 0;
  for (const auto& src : fuzz_corpus(kFuzzCount)) {
    const TcnNetwork t = tcn(src);
    const PreprocessResult p = preprocess(t, false);
    const SolutionSet want = enumerate(src);
    const SolutionSet got = expand(enumerate(p.network), p.substitution, t.original_vars);
    if (got.rows != want.rows) {
      o.fail("solutions differ on\n" + render_model(src));
      break;
    }
    const std::string once = dump(p.network);
    if (dump(preprocess(p.network, false).network) != once) {
      o.fail("second preprocess changed\n" + once);
      break;
    }
    ++n;
  }
  if (o.ok) o.detail = std::to_string(n) + " networks, idempotent";
  return o;
}

std::vector<std::string> source_names(const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& n : names) {
    if (!n.starts_with("__")) out.push_back(n);
  }
  return out;
}

// Positions of the merge {x, w}, the merge {y, z} and the rewrite of the
// doubled sum, with auxiliary names dropped from merged classes.
std::optional<std::string> check_worked_trace(const PreprocessReport& report, bool exact_names) {
  const auto& trace = report.trace;
  auto first = [&](auto pred) {
    return static_cast<std::size_t>(std::find_if(trace.begin(), trace.end(), pred) - trace.begin());
  };
  const std::size_t cse = first([](const TraceEvent& e) {
    return e.stage == Stage::Cse && e.kind == TraceEvent::Kind::Merge &&
           source_names(e.merged) == std::vector<std::string>{"x", "w"};
  });
  const std::size_t eq = first([](const TraceEvent& e) {
    return e.rule == AsRule::EqTrue && e.kind == TraceEvent::Kind::Merge &&
           source_names(e.merged) == std::vector<std::string>{"y", "z"};
  });
  const std::size_t dbl = first([&](const TraceEvent& e) {
    return e.rule == AsRule::AddDouble && e.kind == TraceEvent::Kind::Rewrite &&
           (!exact_names || e.constraint == "w = y add z");
  });
  if (cse == trace.size()) return "no merge {x, w}";
  if (eq == trace.size()) return "no merge {y, z}";
  if (dbl == trace.size()) return "no rewrite of w = y + y";
  if (!(cse < eq && eq < dbl)) return "trace out of order";
  if (exact_names && trace[dbl].replacement != "x = y mul __CONSTANT_2") return "rewrite gave " + trace[dbl].replacement;
  if (!report.unsat) return "preprocessing did not prove UNSAT";
  return std::nullopt;
}

Outcome ac4(const std::vector<CorpusModel>& corpus) {
  Outcome o;
  TcnNetwork direct;
  const VarId x = direct.domains.add("x", {0, 1});
  const VarId y = direct.domains.add("y");
  const VarId z = direct.domains.add("z");
  const VarId w = direct.domains.add("w", {1, 2});
  direct.original_vars = {x, y, z, w};
  direct.constraints = {{x, TcnOp::Add, y, z}, {w, TcnOp::Add, y, z}, {x, TcnOp::Eq, y, z}};
  if (auto err = check_worked_trace(preprocess(direct).report, true)) o.fail("ternary form: " + *err);

  const auto it = std::find_if(corpus.begin(), corpus.end(), [](const auto& m) { return m.name == "worked_example"; });
  if (it == corpus.end()) {
    o.fail("worked_example.tcm missing");
    return o;
  }
  if (auto err = check_worked_trace(preprocess(tcn(it->net)).report, false)) o.fail("decomposed model: " + *err);

  const ModelSolveResult r = solve_model(it->net);
  if (r.status != SolveStatus::Unsat) o.fail("solver status " + std::string(to_string(r.status)));
  if (r.stats.nodes != 0) o.fail(std::to_string(r.stats.nodes) + " search nodes");
  if (o.ok) o.detail = "merge {x,w}, merge {y,z}, w = y*2, UNSAT with 0 nodes";
  return o;
}

// Exhaustive propagator contract on [-5,5].
constexpr bound_t kLo = -5;
constexpr bound_t kHi = 5;

using Triple = std::array<bound_t, 3>;

std::vector<Interval> all_intervals() {
  std::vector<Interval> out;
  for (bound_t a = kLo; a <= kHi; ++a) {
    for (bound_t b = a; b <= kHi; ++b) out.emplace_back(a, b);
  }
  return out;
}

Box normalized(const Box& in, const Box& b) {
  Box r{in[0].intersect(b[0]), in[1].intersect(b[1]), in[2].intersect(b[2])};
  if (r[0].is_empty() || r[1].is_empty() || r[2].is_empty()) return detail::all_empty();
  return r;
}

bool box_leq(const Box& a, const Box& b) {
  return a[0].subset_of(b[0]) && a[1].subset_of(b[1]) && a[2].subset_of(b[2]);
}

std::string show(const Box& b) { return b[0].to_string() + " " + b[1].to_string() + " " + b[2].to_string(); }

Outcome ac5() {
  Outcome o;
  const auto itvs = all_intervals();
  std::mt19937_64 rng(5);
  auto pick = [&](const Interval& outer) {
    std::uniform_int_distribution<bound_t> u(outer.lb(), outer.ub());
    bound_t a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    return Interval(a, b);
  };
  std::size_t boxes = 0, pairs = 0;
  for (TcnOp op : kAllOps) {
    std::vector<Triple> support;
    for (bound_t x = kLo; x <= kHi; ++x) {
      for (bound_t y = kLo; y <= kHi; ++y) {
        for (bound_t z = kLo; z <= kHi; ++z) {
          if (detail::reference_holds(op, x, y, z)) support.push_back({x, y, z});
        }
      }
    }
    const std::string name(to_token(op));
    for (const auto& ix : itvs) {
      for (const auto& iy : itvs) {
        for (const auto& iz : itvs) {
          const Box in{ix, iy, iz};
          const Box got = project(op, ix, iy, iz);
          ++boxes;
          for (int i = 0; i < 3; ++i) {
            if (!got[i].subset_of(in[i]) && o.ok) o.fail(name + " not reductive on " + show(in));
          }
          Box exact = detail::all_empty();
          for (const Triple& t : support) {
            if (ix.contains(t[0]) && iy.contains(t[1]) && iz.contains(t[2])) {
              for (int i = 0; i < 3; ++i) exact[i] = exact[i].hull(Interval::singleton(t[i]));
            }
          }
          if (!box_leq(exact, got) && o.ok) o.fail(name + " unsound on " + show(in) + " gave " + show(got));
          if (ix.is_singleton() && iy.is_singleton() && iz.is_singleton()) {
            const bool sat = detail::reference_holds(op, ix.lb(), iy.lb(), iz.lb());
            const Box n = normalized(in, got);
            if (sat ? n != in : n != detail::all_empty()) {
              if (o.ok) o.fail(name + " not singleton complete on " + show(in));
            }
          }
          if (!o.ok) return o;
        }
      }
    }
    for (int s = 0; s < 10'000; ++s) {
      const Box big{pick({kLo, kHi}), pick({kLo, kHi}), pick({kLo, kHi})};
      const Box small{pick(big[0]), pick(big[1]), pick(big[2])};
      const Box fs = normalized(small, project(op, small[0], small[1], small[2]));
      const Box fb = normalized(big, project(op, big[0], big[1], big[2]));
      ++pairs;
      if (!box_leq(fs, fb)) {
        o.fail(name + " not monotone: " + show(small) + " within " + show(big));
        return o;
      }
    }
  }
  o.detail = std::to_string(boxes) + " boxes, " + std::to_string(pairs) + " ordered pairs";
  return o;
}

Outcome ac6(const std::vector<CorpusModel>& corpus) {
  Outcome o;
  std::size_t runs = 0;
  for (const auto& m : corpus) {
    const TcnNetwork t = tcn(m.net);
    const PreprocessResult p = preprocess(t, false);
    for (const TcnNetwork* net : {&t, &p.network}) {
      Domains base = net->domains.domains();
      const bool ok = fixpoint(base, net->constraints, {.schedule = Schedule::Fifo});
      std::vector<PropagationOptions> others{{.schedule = Schedule::Lifo}};
      for (std::uint64_t seed = 1; seed <= 10; ++seed) others.push_back({.schedule = Schedule::Random, .seed = seed});
      for (const auto& opts : others) {
        Domains d = net->domains.domains();
        const bool r = fixpoint(d, net->constraints, opts);
        ++runs;
        if (r != ok || (ok && d != base)) {
          o.fail(m.name + ": schedule disagrees with fifo");
          return o;
        }
      }
    }
  }
  o.detail = std::to_string(corpus.size()) + " models, " + std::to_string(runs) + " non-fifo runs";
  return o;
}

// Rewrite-rule audit on [-4,4].
constexpr bound_t kRuleLo = -4;
constexpr bound_t kRuleHi = 4;

struct Builder {
  TcnNetwork net;
  VarId x, y;

  Builder(Interval dx, Interval dy) {
    x = net.domains.add("x", dx);
    y = net.domains.add("y", dy);
    net.original_vars = {x, y};
  }
  VarId k(bound_t v) { return extend_const(net.domains, v); }
  void con(VarId r, TcnOp op, VarId a, VarId b) { net.constraints.push_back({r, op, a, b}); }
};

struct Arm {
  AsRule rule;
  std::function<void(Builder&, bound_t)> build;
};

std::vector<Arm> arms() {
  using O = TcnOp;
  using R = AsRule;
  return {
      {R::AddSelf, [](Builder& b, bound_t) { b.con(b.x, O::Add, b.x, b.y); }},
      {R::AddZero, [](Builder& b, bound_t) { b.con(b.x, O::Add, b.y, b.k(0)); }},
      {R::AddDouble, [](Builder& b, bound_t) { b.con(b.x, O::Add, b.y, b.y); }},
      {R::MulSelfConst, [](Builder& b, bound_t k) { b.con(b.x, O::Mul, b.x, b.k(k)); }},
      {R::SquareConst, [](Builder& b, bound_t k) { b.con(b.k(k), O::Mul, b.x, b.x); }},
      {R::MulOne, [](Builder& b, bound_t) { b.con(b.x, O::Mul, b.y, b.k(1)); }},
      {R::MulSelfSelf, [](Builder& b, bound_t) { b.con(b.x, O::Mul, b.x, b.x); }},
      {R::OneDivSelf, [](Builder& b, bound_t) { b.con(b.x, O::Div, b.k(1), b.x); }},
      {R::ZeroDivSelf, [](Builder& b, bound_t) { b.con(b.x, O::Div, b.k(0), b.x); }},
      {R::ConstDivSelf, [](Builder& b, bound_t k) { b.con(b.k(k), O::Div, b.x, b.x); }},
      {R::DivOne, [](Builder& b, bound_t) { b.con(b.x, O::Div, b.y, b.k(1)); }},
      {R::DivSelf, [](Builder& b, bound_t) { b.con(b.x, O::Div, b.x, b.x); }},
      {R::ModSelf, [](Builder& b, bound_t) { b.con(b.x, O::Mod, b.x, b.x); }},
      {R::ModSelfConst, [](Builder& b, bound_t k) { b.con(b.x, O::Mod, b.x, b.k(k)); }},
      {R::ConstModSelf, [](Builder& b, bound_t k) { b.con(b.x, O::Mod, b.k(k), b.x); }},
      {R::ZeroModSelf, [](Builder& b, bound_t) { b.con(b.k(0), O::Mod, b.x, b.x); }},
      {R::MinSame, [](Builder& b, bound_t) { b.con(b.x, O::Min, b.y, b.y); }},
      {R::MaxSame, [](Builder& b, bound_t) { b.con(b.x, O::Max, b.y, b.y); }},
      {R::MinSelf, [](Builder& b, bound_t) { b.con(b.x, O::Min, b.x, b.y); }},
      {R::MaxSelf, [](Builder& b, bound_t) { b.con(b.x, O::Max, b.y, b.x); }},
      {R::EqTrue, [](Builder& b, bound_t) { b.con(b.k(1), O::Eq, b.x, b.y); }},
      {R::EqSame, [](Builder& b, bound_t) { b.con(b.x, O::Eq, b.y, b.y); }},
      {R::EqSelfConst, [](Builder& b, bound_t k) { b.con(b.x, O::Eq, b.x, b.k(k)); }},
      {R::LeSame, [](Builder& b, bound_t) { b.con(b.x, O::Le, b.y, b.y); }},
      {R::LeSelfConst, [](Builder& b, bound_t k) { b.con(b.x, O::Le, b.x, b.k(k)); }},
      {R::ConstLeSelf, [](Builder& b, bound_t k) { b.con(b.x, O::Le, b.k(k), b.x); }},
  };
}

// The state <d, C, E> after one simplify pass, as a plain network: domains
// are d_E and every merged variable is tied to its representative.
TcnNetwork as_network(const Preprocessor& p) {
  TcnNetwork out;
  const auto& d = p.domains();
  for (VarId v = 0; v < d.size(); ++v) out.domains.add(d.name(v), p.dom(v));
  out.constraints = p.constraints();
  for (VarId v = 0; v < d.size(); ++v) {
    const VarId r = p.partition().representative(v);
    if (r == v) continue;
    const VarId one = extend_const(out.domains, 1);
    out.constraints.push_back({one, TcnOp::Eq, v, r});
  }
  return out;
}

Outcome ac7() {
  Outcome o;
  const std::vector<Interval> doms{{kRuleLo, kRuleHi}, {0, kRuleHi}, {kRuleLo, 0}, {1, kRuleHi}, {kRuleLo, -1}, {0, 1}};
  const std::vector<VarId> orig{0, 1};
  std::size_t instances = 0;
  std::vector<AsRule> corrected_seen;
  for (const Arm& arm : arms()) {
    std::size_t fired = 0;
    for (bound_t k = kRuleLo; k <= kRuleHi; ++k) {
      for (const Interval& dx : doms) {
        for (const Interval& dy : doms) {
          Builder b(dx, dy);
          arm.build(b, k);
          const SolutionSet want = enumerate(b.net, orig);
          Preprocessor p(b.net);
          p.simplify();
          bool hit = false;
          for (const auto& e : p.report().trace) {
            if (e.rule && *e.rule != arm.rule) {
              o.fail(std::string(pattern(arm.rule)) + " matched as " + std::string(pattern(*e.rule)));
              return o;
            }
            if (e.rule) hit = true;
            if (e.corrected) corrected_seen.push_back(arm.rule);
          }
          if (hit || p.constraints() != b.net.constraints) ++fired;
          const SolutionSet got = enumerate(as_network(p), orig);
          ++instances;
          if (got.rows != want.rows) {
            o.fail(std::string(pattern(arm.rule)) + " changes solutions with k=" + std::to_string(k) + " x in " +
                   dx.to_string() + " y in " + dy.to_string());
            return o;
          }
        }
      }
    }
    if (fired == 0) {
      o.fail(std::string(pattern(arm.rule)) + " never fired");
      return o;
    }
  }
  for (AsRule r : {AsRule::EqSelfConst, AsRule::ModSelf, AsRule::ZeroModSelf, AsRule::ConstLeSelf}) {
    if (std::find(corrected_seen.begin(), corrected_seen.end(), r) == corrected_seen.end()) {
      o.fail(std::string(pattern(r)) + " corrected arm not exercised");
      return o;
    }
  }
  o.detail = "26 arms, " + std::to_string(instances) + " instances";
  return o;
}

Outcome ac8() {
  Outcome o;
  {
    TcnNetwork n;
    const VarId a = n.domains.add("a"), b = n.domains.add("b"), y = n.domains.add("y"), z = n.domains.add("z");
    n.constraints = {{a, TcnOp::Add, y, z}, {b, TcnOp::Add, z, y}};
    Preprocessor p(n, false);
    if (p.icse() != 1 || p.constraints().size() != 1 || !p.partition().same(a, b)) o.fail("a = y+z, b = z+y");
  }
  {
    TcnNetwork n;
    const VarId a = n.domains.add("a"), b = n.domains.add("b"), y = n.domains.add("y"), z = n.domains.add("z");
    n.constraints = {{a, TcnOp::Div, y, z}, {b, TcnOp::Div, z, y}};
    Preprocessor p(n, false);
    if (p.icse() != 0 || p.constraints().size() != 2 || p.partition().same(a, b)) o.fail("a = y/z, b = z/y");
  }
  auto synthetic = [](std::size_t m) {
    std::mt19937_64 rng(m);
    TcnNetwork n;
    const std::size_t pool = 400;
    for (std::size_t i = 0; i < pool + m; ++i) n.domains.add("v" + std::to_string(i));
    for (std::size_t i = 0; i < m; ++i) {
      n.constraints.push_back({static_cast<VarId>(pool + i), kAllOps[rng() % kAllOps.size()],
                               static_cast<VarId>(rng() % pool), static_cast<VarId>(rng() % pool)});
    }
    return n;
  };
  std::vector<std::pair<std::size_t, double>> timings;
  for (std::size_t m : {12'500u, 25'000u, 50'000u, 100'000u}) {
    const TcnNetwork n = synthetic(m);
    double best = 1e9;
    for (int rep = 0; rep < 3; ++rep) {
      Preprocessor p(n, false);
      const auto start = std::chrono::steady_clock::now();
      const std::size_t removed = p.icse();
      best = std::min(best, seconds_since(start));
      if (removed == 0) o.fail("synthetic set had no duplicates");
    }
    timings.emplace_back(m, best);
  }
  // least-squares slope of log time against log size: 1 for linear growth, 2 for quadratic
  double mx = 0, my = 0;
  for (const auto& [m, t] : timings) {
    mx += std::log(static_cast<double>(m));
    my += std::log(std::max(t, 1e-6));
  }
  mx /= static_cast<double>(timings.size());
  my /= static_cast<double>(timings.size());
  double sxy = 0, sxx = 0;
  for (const auto& [m, t] : timings) {
    const double dx = std::log(static_cast<double>(m)) - mx;
    sxy += dx * (std::log(std::max(t, 1e-6)) - my);
    sxx += dx * dx;
  }
  const double slope = sxy / sxx;
  const double t_big = timings.back().second;
  if (t_big > 2.0) o.fail("1e5 constraints took " + std::to_string(t_big) + " s");
  if (slope > 1.6) o.fail("log-log slope " + std::to_string(slope));
  if (o.ok) {
    std::ostringstream s;
    s << "1e5 constraints in " << t_big << " s; log-log slope " << slope;
    o.detail = s.str();
  }
  return o;
}

Outcome ac9() {
  Outcome o;
  testing::RandomNetworkOptions opts;
  opts.minimize = true;
  testing::NetworkGenerator gen(99, opts);
  std::size_t unsat = 0;
  for (int i = 0; i < 100; ++i) {
    const SourceNetwork src = gen.next();
    const SolutionSet all = enumerate(src);
    const VarId obj = src.objective.var;
    const ModelSolveResult r = solve_model(src);
    for (const auto& s : r.solutions) {
      if (!satisfies(s, src)) {
        o.fail("emitted non-solution on\n" + render_model(src));
        return o;
      }
    }
    if (all.empty()) {
      ++unsat;
      if (r.status != SolveStatus::Unsat) o.fail("expected UNSAT on\n" + render_model(src));
    } else {
      bound_t best = all.rows.front()[obj];
      for (const auto& row : all.rows) best = std::min(best, row[obj]);
      if (r.status != SolveStatus::Optimal || r.objective != best || r.solutions.empty() ||
          r.solutions.back()[obj] != best) {
        o.fail("optimum differs from " + std::to_string(best) + " on\n" + render_model(src));
      }
    }
    if (!o.ok) return o;
  }
  o.detail = "100 instances, " + std::to_string(unsat) + " unsat";
  return o;
}

Outcome ac10(const std::vector<CorpusModel>& corpus) {
  Outcome o;
  for (const auto& m : corpus) {
    const ModelStats s = model_stats(m.net);
    if (s.preprocessed.variables > s.tcn.variables || s.preprocessed.constraints > s.tcn.constraints) {
      o.fail(m.name + " grew under preprocessing");
      return o;
    }
  }
  std::ostringstream out, err;
  if (cli::cmd_stats_batch(TCN_CORPUS_DIR, false, out, err) != 0) {
    o.fail("batch stats failed: " + err.str());
    return o;
  }
  const std::string text = out.str();
  for (const char* needle : {"average", "median", "stddev", "max", "\nTCN ", "\nPreprocessed "}) {
    if (text.find(needle) == std::string::npos) o.fail(std::string("table lacks ") + needle);
  }
  if (o.ok) o.detail = std::to_string(corpus.size()) + " models";
  return o;
}

}  // namespace
}  // namespace tcn

int main() {
  using namespace tcn;
  std::vector<CorpusModel> corpus;
  try {
    corpus = load_corpus();
  } catch (const std::exception& e) {
    std::cout << "[FAIL] corpus: " << e.what() << "\n";
    return 1;
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> gates{
      {"AC1 decomposition preserves projected solutions", [] { return ac1_ac2(false); }},
      {"AC2 decomposition preserves solution counts", [] { return ac1_ac2(true); }},
      {"AC3 preprocessing preserves solutions and is idempotent", ac3},
      {"AC4 worked example is UNSAT by preprocessing", [&] { return ac4(corpus); }},
      {"AC5 propagator contracts", ac5},
      {"AC6 schedule independence", [&] { return ac6(corpus); }},
      {"AC7 rewrite arms agree with enumeration", ac7},
      {"AC8 common subexpression elimination", ac8},
      {"AC9 optimization matches enumeration", ac9},
      {"AC10 stats shape", [&] { return ac10(corpus); }},
  };
  int failures = 0;
  for (const auto& [name, gate] : gates) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = gate();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double t = seconds_since(start);
    std::ostringstream time;
    time.precision(2);
    time << std::fixed << t;
    std::cout << (o.ok ? "[PASS] " : "[FAIL] ") << name << " (" << o.detail << "; " << time.str() << " s)\n";
    if (!o.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
