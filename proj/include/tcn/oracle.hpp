#ifndef TCN_ORACLE_HPP
#define TCN_ORACLE_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "tcn/model.hpp"
#include "tcn/preprocess.hpp"
#include "tcn/ternary.hpp"

namespace tcn {

/// Sorted, duplicate-free assignments over `vars` (row[i] is the value of
/// vars[i]).
struct SolutionSet {
  std::vector<VarId> vars;
  std::vector<std::vector<bound_t>> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }

  bool contains(std::span<const bound_t> row) const {
    return std::binary_search(rows.begin(), rows.end(), std::vector<bound_t>(row.begin(), row.end()));
  }

  void normalize() {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  }

  friend bool operator==(const SolutionSet&, const SolutionSet&) = default;
};

struct OracleOptions {
  /// Maximum number of enumeration nodes before TooLarge is raised.
  std::uint64_t cap = 10'000'000;
};

namespace detail {

/// Deliberately written apart from the solver's own definitions.
inline bool reference_holds(TcnOp op, bound_t x, bound_t y, bound_t z) {
  using W = wide_t;
  switch (op) {
    case TcnOp::Add: return W(y) + W(z) == W(x);
    case TcnOp::Mul: return W(y) * W(z) == W(x);
    case TcnOp::Div: {
      if (z == 0) return false;
      W q = W(y) / W(z);  // C++ division truncates
      return q == W(x);
    }
    case TcnOp::Mod: {
      if (z == 0) return false;
      const W m = z < 0 ? -W(z) : W(z);
      W r = W(y) - m * floor_div(W(y), m);
      return r == W(x);
    }
    case TcnOp::Min: return x == (y < z ? y : z);
    case TcnOp::Max: return x == (y < z ? z : y);
    case TcnOp::Eq: return (x == 1 && y == z) || (x == 0 && y != z);
    case TcnOp::Le: return (x == 1 && y <= z) || (x == 0 && y > z);
  }
  return false;
}

/// Value forced on one position of c by the two others, if the operator is
/// invertible there.
inline std::optional<bound_t> forced(const TernaryConstraint& c, int pos, std::span<const bound_t> asn) {
  using W = wide_t;
  auto fit = [](W w) -> std::optional<bound_t> {
    if (w < MIN_FINITE || w > MAX_FINITE) return std::nullopt;
    return static_cast<bound_t>(w);
  };
  const bound_t x = asn[c.x], y = asn[c.y], z = asn[c.z];
  if (pos == 0) {
    switch (c.op) {
      case TcnOp::Add: return fit(W(y) + z);
      case TcnOp::Mul: return fit(W(y) * z);
      case TcnOp::Div: return z == 0 ? std::nullopt : fit(W(y) / z);
      case TcnOp::Mod: {
        if (z == 0) return std::nullopt;
        const W m = z < 0 ? -W(z) : W(z);
        return fit(W(y) - m * floor_div(W(y), m));
      }
      case TcnOp::Min: return std::min(y, z);
      case TcnOp::Max: return std::max(y, z);
      case TcnOp::Eq: return y == z ? 1 : 0;
      case TcnOp::Le: return y <= z ? 1 : 0;
    }
  }
  if (c.op == TcnOp::Add) return pos == 1 ? fit(W(x) - z) : fit(W(x) - y);
  return std::nullopt;
}

class Enumerator {
 public:
  Enumerator(const TcnNetwork& net, OracleOptions opts) : net_(net), opts_(opts) {}

  std::vector<std::vector<bound_t>> run() {
    const auto& d = net_.domains;
    const std::size_t n = d.size();
    if (d.has_empty()) return {};
    plan(n);
    asn_.assign(n, 0);
    step(0);
    return std::move(out_);
  }

 private:
  struct Step {
    VarId var;
    std::optional<std::size_t> from;  // constraint computing the value
    int pos = 0;
    std::vector<std::size_t> checks;  // constraints fully assigned after this step
  };

  void plan(std::size_t n) {
    const auto& cs = net_.constraints;
    std::vector<bool> assigned(n, false);
    std::vector<bool> checked(cs.size(), false);
    for (std::size_t placed = 0; placed < n; ++placed) {
      Step s{};
      bool found = false;
      for (std::size_t i = 0; i < cs.size() && !found; ++i) {
        const VarId v[3] = {cs[i].x, cs[i].y, cs[i].z};
        for (int p = 0; p < 3 && !found; ++p) {
          if (assigned[v[p]] || (p > 0 && cs[i].op != TcnOp::Add)) continue;
          bool others = true;
          for (int q = 0; q < 3; ++q) {
            if (q != p && (v[q] == v[p] || !assigned[v[q]])) others = false;
          }
          if (others) {
            s = {v[p], i, p, {}};
            found = true;
          }
        }
      }
      if (!found) {
        for (VarId v = 0; v < n; ++v) {
          if (assigned[v]) continue;
          if (!net_.domains[v].is_finite()) continue;
          s = {v, std::nullopt, 0, {}};
          found = true;
          break;
        }
      }
      if (!found) {
        for (VarId v = 0; v < n; ++v) {
          if (!assigned[v]) throw Error(ErrorKind::UnboundedVariable, net_.domains.name(v));
        }
      }
      assigned[s.var] = true;
      for (std::size_t i = 0; i < cs.size(); ++i) {
        if (!checked[i] && assigned[cs[i].x] && assigned[cs[i].y] && assigned[cs[i].z]) {
          checked[i] = true;
          s.checks.push_back(i);
        }
      }
      steps_.push_back(std::move(s));
    }
  }

  void step(std::size_t k) {
    if (++nodes_ > opts_.cap) throw Error(ErrorKind::TooLarge, std::to_string(opts_.cap));
    if (k == steps_.size()) {
      out_.push_back(asn_);
      return;
    }
    const Step& s = steps_[k];
    const Interval& dom = net_.domains[s.var];
    auto descend = [&](bound_t v) {
      asn_[s.var] = v;
      for (std::size_t i : s.checks) {
        const auto& c = net_.constraints[i];
        if (!reference_holds(c.op, asn_[c.x], asn_[c.y], asn_[c.z])) return;
      }
      step(k + 1);
    };
    if (s.from) {
      const auto v = forced(net_.constraints[*s.from], s.pos, asn_);
      if (v && dom.contains(*v)) descend(*v);
      return;
    }
    for (bound_t v = dom.lb();; ++v) {
      descend(v);
      if (v == dom.ub()) break;
    }
  }

  const TcnNetwork& net_;
  OracleOptions opts_;
  std::vector<Step> steps_;
  std::vector<bound_t> asn_;
  std::vector<std::vector<bound_t>> out_;
  std::uint64_t nodes_ = 0;
};

inline std::vector<VarId> all_vars(std::size_t n) {
  std::vector<VarId> v(n);
  for (VarId i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace detail

/// Restriction of every row to `vars` (a subset of s.vars), deduplicated.
inline SolutionSet project(const SolutionSet& s, std::span<const VarId> vars) {
  std::vector<std::size_t> idx;
  for (VarId v : vars) {
    auto it = std::find(s.vars.begin(), s.vars.end(), v);
    if (it == s.vars.end()) throw Error(ErrorKind::UnknownVariable, "#" + std::to_string(v));
    idx.push_back(static_cast<std::size_t>(it - s.vars.begin()));
  }
  SolutionSet out;
  out.vars.assign(vars.begin(), vars.end());
  for (const auto& row : s.rows) {
    std::vector<bound_t> r;
    for (std::size_t i : idx) r.push_back(row[i]);
    out.rows.push_back(std::move(r));
  }
  out.normalize();
  return out;
}

/// sol(d, C) by cross product over every variable, restricted to `vars` when
/// given.
inline SolutionSet enumerate(const SourceNetwork& net, std::optional<std::vector<VarId>> vars = std::nullopt,
                             OracleOptions opts = {}) {
  const auto& d = net.domains;
  SolutionSet all;
  all.vars = detail::all_vars(d.size());
  if (!d.has_empty()) {
    std::uint64_t total = 1;
    for (VarId v = 0; v < d.size(); ++v) {
      if (!d[v].is_finite()) throw Error(ErrorKind::UnboundedVariable, d.name(v));
      const auto sz = d[v].size().count;
      if (total > opts.cap / sz) throw Error(ErrorKind::TooLarge, std::to_string(opts.cap));
      total *= sz;
    }
    std::vector<bound_t> asn(d.size());
    for (VarId v = 0; v < d.size(); ++v) asn[v] = d[v].lb();
    for (std::uint64_t i = 0; i < total; ++i) {
      if (satisfies(asn, net)) all.rows.push_back(asn);
      for (VarId v = 0; v < d.size(); ++v) {
        if (asn[v] < d[v].ub()) {
          ++asn[v];
          break;
        }
        asn[v] = d[v].lb();
      }
    }
  }
  all.normalize();
  return vars ? project(all, *vars) : all;
}

/// sol(d, C) of a ternary network. Variables the constraints make functions
/// of others (results, and either operand of an addition) are computed rather
/// than enumerated, so they may have unbounded domains.
inline SolutionSet enumerate(const TcnNetwork& net, std::optional<std::vector<VarId>> vars = std::nullopt,
                             OracleOptions opts = {}) {
  SolutionSet all;
  all.vars = detail::all_vars(net.domains.size());
  all.rows = detail::Enumerator(net, opts).run();
  all.normalize();
  return vars ? project(all, *vars) : all;
}

/// Solutions of a preprocessed network mapped back to variables of the
/// network given to preprocess. Eliminated classes range over their domain.
inline SolutionSet expand(const SolutionSet& out, const Substitution& sub, std::span<const VarId> vars) {
  std::vector<VarId> free_reps;
  for (VarId v : vars) {
    const auto& e = sub.entries.at(v);
    if (!e.target && std::find(free_reps.begin(), free_reps.end(), e.representative) == free_reps.end()) {
      if (!e.domain.is_finite() && !e.domain.is_empty()) throw Error(ErrorKind::UnboundedVariable, e.name);
      free_reps.push_back(e.representative);
    }
  }
  SolutionSet r;
  r.vars.assign(vars.begin(), vars.end());
  std::vector<bound_t> pick(free_reps.size());
  for (const auto& row : out.rows) {
    // rows are over all output variables, in id order
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == free_reps.size()) {
        std::vector<bound_t> vals;
        for (VarId v : vars) {
          const auto& e = sub.entries[v];
          if (e.target) {
            vals.push_back(row[*e.target]);
          } else {
            const auto it = std::find(free_reps.begin(), free_reps.end(), e.representative);
            vals.push_back(pick[static_cast<std::size_t>(it - free_reps.begin())]);
          }
        }
        r.rows.push_back(std::move(vals));
        return;
      }
      const Interval& dom = sub.entries[free_reps[k]].domain;
      if (dom.is_empty()) return;
      for (bound_t v = dom.lb();; ++v) {
        pick[k] = v;
        rec(k + 1);
        if (v == dom.ub()) break;
      }
    };
    rec(0);
  }
  r.normalize();
  return r;
}

struct Verdict {
  bool set_equal = false;
  bool count_equal = false;
  std::size_t count_a = 0;
  std::size_t count_b = 0;
  /// A projected assignment in one set but not the other.
  std::optional<std::vector<bound_t>> counterexample;
  /// True when the counterexample is a solution of a only.
  bool only_in_a = false;

  bool ok() const { return set_equal && count_equal; }
};

/// Compares projected solution sets and full solution counts.
template <class A, class B>
Verdict check_equivalence(const A& a, const B& b, std::span<const VarId> project_to, OracleOptions opts = {}) {
  const SolutionSet sa = enumerate(a, std::nullopt, opts);
  const SolutionSet sb = enumerate(b, std::nullopt, opts);
  const SolutionSet pa = project(sa, project_to);
  const SolutionSet pb = project(sb, project_to);
  Verdict v;
  v.count_a = sa.size();
  v.count_b = sb.size();
  v.count_equal = v.count_a == v.count_b;
  v.set_equal = pa.rows == pb.rows;
  if (!v.set_equal) {
    for (const auto& r : pa.rows) {
      if (!pb.contains(r)) {
        v.counterexample = r;
        v.only_in_a = true;
        break;
      }
    }
    if (!v.counterexample) {
      for (const auto& r : pb.rows) {
        if (!pa.contains(r)) {
          v.counterexample = r;
          break;
        }
      }
    }
  }
  return v;
}

}  // namespace tcn

#endif
