#ifndef TCN_SEARCH_HPP
#define TCN_SEARCH_HPP

#include <algorithm>
#include <chrono>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tcn/decompose.hpp"
#include "tcn/model.hpp"
#include "tcn/preprocess.hpp"
#include "tcn/propagation.hpp"

namespace tcn {

enum class SolveStatus { Optimal, Sat, Unsat, Unknown };

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "OPTIMAL";
    case SolveStatus::Sat: return "SAT";
    case SolveStatus::Unsat: return "UNSAT";
    case SolveStatus::Unknown: return "UNKNOWN";
  }
  return "?";
}

struct SearchStats {
  /// Nodes visited below the root.
  std::uint64_t nodes = 0;
  std::uint64_t fails = 0;
  std::size_t peak_depth = 0;
  std::uint64_t solutions = 0;
  std::uint64_t propagations = 0;
  double wall_seconds = 0;
};

using Assignment = std::vector<bound_t>;

struct SolveOptions {
  /// Satisfaction only: enumerate every solution instead of stopping at the
  /// first one.
  bool all_solutions = false;
  std::optional<double> timeout_seconds;
  PropagationOptions propagation;
  /// Called for each solution (satisfaction) or incumbent (optimization).
  std::function<void(const Assignment&)> on_solution;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  /// Last solution found, over the variables of the searched network.
  std::optional<Assignment> best;
  std::optional<bound_t> objective;
  /// Every solution, in all-solutions mode.
  std::vector<Assignment> solutions;
  SearchStats stats;
};

namespace detail {

/// Non-singleton variable of smallest cardinality among `vars`, smallest id
/// on ties.
inline std::optional<VarId> choose_split(const Domains& d, std::span<const VarId> vars) {
  std::optional<VarId> best;
  for (VarId v : vars) {
    const Interval& i = d[v];
    if (i.is_singleton()) continue;
    if (!i.is_finite()) throw Error(ErrorKind::UnboundedVariable, "#" + std::to_string(v));
    if (!best || i.size() < d[*best].size() || (i.size() == d[*best].size() && v < *best)) best = v;
  }
  return best;
}

}  // namespace detail

/// Splits the chosen domain among `vars` at its floor midpoint: [lo, mid]
/// first, then [mid+1, hi].
inline std::vector<Domains> split(const Domains& d, std::span<const VarId> vars) {
  const auto best = detail::choose_split(d, vars);
  if (!best) throw Error(ErrorKind::NothingToSplit);
  const Interval& i = d[*best];
  const auto mid = static_cast<bound_t>(detail::floor_div(detail::wide_t(i.lb()) + i.ub(), 2));
  std::vector<Domains> out(2, d);
  out[0][*best] = Interval(i.lb(), mid);
  out[1][*best] = Interval(mid + 1, i.ub());
  return out;
}

inline std::vector<Domains> split(const Domains& d) {
  std::vector<VarId> all(d.size());
  for (VarId v = 0; v < d.size(); ++v) all[v] = v;
  return split(d, all);
}

inline std::vector<DomainStore> split(const DomainStore& d) {
  std::vector<DomainStore> out;
  try {
    for (Domains& child : split(d.domains())) {
      DomainStore s = d;
      s.domains() = std::move(child);
      out.push_back(std::move(s));
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnboundedVariable) throw;
    const VarId v = static_cast<VarId>(std::stoul(e.subject().substr(1)));
    throw Error(ErrorKind::UnboundedVariable, d.name(v));
  }
  return out;
}

namespace detail {

class Searcher {
 public:
  Searcher(const TcnNetwork& net, const SolveOptions& opts)
      : net_(net), opts_(opts), engine_(net.constraints, net.domains.size(), opts.propagation) {}

  SolveResult run() {
    const auto start = std::chrono::steady_clock::now();
    if (opts_.timeout_seconds) {
      deadline_ = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(*opts_.timeout_seconds));
    }
    solve();
    result_.stats.propagations = engine_.stats().steps;
    result_.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return std::move(result_);
  }

 private:
  struct Node {
    Domains d;
    std::size_t depth;
    VarId changed;
  };

  bool optimizing() const { return net_.objective.is_optimization(); }

  bool expired() const { return deadline_ && std::chrono::steady_clock::now() >= *deadline_; }

  void solve() {
    const std::size_t n = net_.domains.size();
    Domains root = net_.domains.domains();
    if (expired()) return finish(true);
    if (has_empty(root) || !engine_.run(root)) return finish(false);

    std::vector<bool> in_scope(n, false);
    for (const auto& c : net_.constraints) in_scope[c.x] = in_scope[c.y] = in_scope[c.z] = true;
    if (optimizing()) in_scope[net_.objective.var] = true;
    for (VarId v = 0; v < n; ++v) {
      if (in_scope[v] && !root[v].is_finite()) throw Error(ErrorKind::UnboundedVariable, net_.domains.name(v));
      if (in_scope[v] || root[v].is_finite()) {
        vars_.push_back(v);
      } else if (opts_.all_solutions && !optimizing() && !root[v].is_singleton()) {
        throw Error(ErrorKind::UnboundedVariable, net_.domains.name(v));
      } else {
        free_.push_back(v);
      }
    }

    std::vector<Node> stack;
    stack.push_back({std::move(root), 0, 0});
    bool is_root = true;
    while (!stack.empty() && !done_) {
      Node node = std::move(stack.back());
      stack.pop_back();
      if (!is_root) {
        if (expired()) return finish(true);
        ++result_.stats.nodes;
        result_.stats.peak_depth = std::max(result_.stats.peak_depth, node.depth);
      }
      visit(node, stack);
      is_root = false;
    }
    finish(false);
  }

  /// Tightens, propagates, records or branches. Children go on `stack`, left
  /// child on top.
  void visit(Node& node, std::vector<Node>& stack) {
    Domains& d = node.d;
    std::vector<VarId> changed;
    if (node.depth > 0) changed.push_back(node.changed);
    if (optimizing() && result_.objective) {
      const VarId z = net_.objective.var;
      const Interval cut = d[z].intersect({NEG_INF, *result_.objective - 1});
      if (cut != d[z]) {
        d[z] = cut;
        changed.push_back(z);
      }
    }
    if (has_empty(d) || (!changed.empty() && !engine_.run(d, changed))) {
      ++result_.stats.fails;
      return;
    }
    const auto v = choose_split(d, vars_);
    if (!v) {
      record(d);
      return;
    }
    const Interval i = d[*v];
    const auto mid = static_cast<bound_t>(floor_div(wide_t(i.lb()) + i.ub(), 2));
    Node right{d, node.depth + 1, *v};
    right.d[*v] = Interval(mid + 1, i.ub());
    d[*v] = Interval(i.lb(), mid);
    stack.push_back(std::move(right));
    stack.push_back({std::move(d), node.depth + 1, *v});
  }

  void record(const Domains& d) {
    Assignment asn(d.size());
    for (VarId v = 0; v < d.size(); ++v) {
      const Interval& i = d[v];
      asn[v] = i.is_singleton() ? i.lb()
                                : std::clamp<bound_t>(0, i.lb() == NEG_INF ? MIN_FINITE : i.lb(),
                                                      i.ub() == POS_INF ? MAX_FINITE : i.ub());
    }
    for (const auto& c : net_.constraints) {
      if (!holds(c, asn)) {
        ++result_.stats.fails;
        return;
      }
    }
    ++result_.stats.solutions;
    if (optimizing()) result_.objective = asn[net_.objective.var];
    if (opts_.on_solution) opts_.on_solution(asn);
    if (opts_.all_solutions && !optimizing()) result_.solutions.push_back(asn);
    result_.best = std::move(asn);
    if (!optimizing() && !opts_.all_solutions) done_ = true;
  }

  void finish(bool interrupted) {
    if (interrupted) {
      result_.status = result_.best ? SolveStatus::Sat : SolveStatus::Unknown;
      return;
    }
    if (!result_.best) {
      result_.status = SolveStatus::Unsat;
    } else {
      result_.status = optimizing() ? SolveStatus::Optimal : SolveStatus::Sat;
    }
  }

  const TcnNetwork& net_;
  const SolveOptions& opts_;
  PropagationEngine engine_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::vector<VarId> vars_;
  std::vector<VarId> free_;
  bool done_ = false;
  SolveResult result_;
};

}  // namespace detail

/// Depth-first branch and bound. Minimization tightens the objective below
/// each incumbent; maximization minimizes an auxiliary z' with 0 = z' + z.
inline SolveResult solve(const TcnNetwork& net, const SolveOptions& opts = {}) {
  if (net.objective.kind != Objective::Kind::Maximize) return detail::Searcher(net, opts).run();
  TcnNetwork m = net;
  const VarId z = net.objective.var;
  const VarId neg = m.domains.add(fresh(m.domains), Interval::top());
  const VarId zero = extend_const(m.domains, 0);
  m.constraints.push_back({zero, TcnOp::Add, neg, z});
  m.objective = Objective::minimize(neg);
  SolveOptions inner = opts;
  const std::size_t n = net.domains.size();
  if (opts.on_solution) {
    inner.on_solution = [&](const Assignment& a) { opts.on_solution(Assignment(a.begin(), a.begin() + n)); };
  }
  SolveResult r = detail::Searcher(m, inner).run();
  if (r.best) {
    r.best->resize(n);
    r.objective = (*r.best)[z];
  }
  return r;
}


struct ModelSolveOptions {
  SolveOptions search;
  bool preprocess = true;
};

struct ModelSolveResult {
  SolveStatus status = SolveStatus::Unknown;
  /// Solutions over the source variables, in the order they were found.
  std::vector<Assignment> solutions;
  std::optional<bound_t> objective;
  SearchStats stats;
  std::optional<PreprocessReport> report;
};

/// Decomposes, optionally preprocesses, searches, and maps each solution back
/// to the variables of the model. `on_solution` receives mapped solutions as
/// they are found.
inline ModelSolveResult solve_model(const SourceNetwork& source, const ModelSolveOptions& opts = {},
                                    std::function<void(const Assignment&)> on_solution = {}) {
  ModelSolveResult out;
  const TcnNetwork decomposed = tcn(source);
  TcnNetwork searched;
  Substitution sub;
  if (opts.preprocess) {
    PreprocessResult p = preprocess(decomposed, false);
    searched = std::move(p.network);
    sub = std::move(p.substitution);
    out.report = std::move(p.report);
  } else {
    searched = decomposed;
    sub = Substitution::identity(decomposed.domains);
  }

  const bool all = opts.search.all_solutions && !source.objective.is_optimization();
  // Eliminated source variables whose class is still open range over their
  // domain when every solution is requested.
  std::vector<VarId> open;
  if (all) {
    for (VarId v : decomposed.original_vars) {
      const auto& e = sub.entries[v];
      if (e.target || e.domain.is_singleton() || e.domain.is_empty()) continue;
      if (!e.domain.is_finite()) throw Error(ErrorKind::UnboundedVariable, e.name);
      if (std::find(open.begin(), open.end(), e.representative) == open.end()) open.push_back(e.representative);
    }
  }

  std::set<Assignment> seen;
  auto emit = [&](const Assignment& asn) {
    Assignment row;
    for (VarId v : decomposed.original_vars) row.push_back(sub.value(v, asn));
    if (open.empty()) {
      if (all && !seen.insert(row).second) return;
      out.solutions.push_back(row);
      if (on_solution) on_solution(row);
      return;
    }
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == open.size()) {
        if (!seen.insert(row).second) return;
        out.solutions.push_back(row);
        if (on_solution) on_solution(row);
        return;
      }
      const Interval dom = sub.entries[open[k]].domain;
      for (bound_t value = dom.lb();; ++value) {
        for (std::size_t i = 0; i < decomposed.original_vars.size(); ++i) {
          const auto& e = sub.entries[decomposed.original_vars[i]];
          if (!e.target && e.representative == open[k]) row[i] = value;
        }
        rec(k + 1);
        if (value == dom.ub()) break;
      }
    };
    rec(0);
  };

  SolveOptions so = opts.search;
  so.on_solution = emit;
  SolveResult r = solve(searched, so);
  out.status = r.status;
  out.stats = r.stats;
  if (r.objective) out.objective = r.objective;
  return out;
}

}  // namespace tcn

#endif
