#ifndef TCN_DECOMPOSE_HPP
#define TCN_DECOMPOSE_HPP

#include <optional>
#include <string>
#include <vector>

#include "tcn/model.hpp"
#include "tcn/ternary.hpp"

namespace tcn {

inline constexpr std::string_view kAuxPrefix = "__aux_";

/// First `__aux_<n>` with n >= start that is not yet declared in d.
/// `start` is only a search hint: the result never depends on it beyond that.
inline std::string fresh(const DomainStore& d, std::size_t start = 0, std::size_t* used = nullptr) {
  for (std::size_t n = start;; ++n) {
    std::string name = std::string(kAuxPrefix) + std::to_string(n);
    if (!d.contains(name)) {
      if (used) *used = n;
      return name;
    }
  }
}

/// Unique name of the variable standing for constant k.
inline std::string constant_name(bound_t k) {
  return std::string(kConstantPrefix) + (k < 0 ? "m" + std::to_string(-k) : std::to_string(k));
}

inline VarId extend(DomainStore& d, std::string name, Interval itv = Interval::top()) {
  return d.add(std::move(name), itv);
}

inline VarId extend(DomainStore& d) { return d.add(fresh(d), Interval::top()); }

inline VarId extend_bool(DomainStore& d) { return d.add(fresh(d), Interval::boolean()); }

/// Returns the variable for constant k, creating it with domain [k,k] if absent.
inline VarId extend_const(DomainStore& d, bound_t k) {
  std::string name = constant_name(k);
  if (auto found = d.find(name)) return *found;
  return d.add(std::move(name), Interval::singleton(k));
}

/// d(x) <- d(x) intersected with itv.
inline void update(DomainStore& d, VarId x, const Interval& itv) { d.update(x, itv); }

/// Rewrites source expressions into ternary constraints, allocating auxiliary
/// variables in `d` with a sequential counter.
class Decomposer {
 public:
  explicit Decomposer(DomainStore& d) : d_(d) {}

  /// Appends the constraints encoding t to `out`; returns the variable holding
  /// the value of t. `top_level` marks t as an activated constraint of the
  /// network, which licenses narrowing domains from membership sets.
  VarId tc(const Expr& t, std::vector<TernaryConstraint>& out, bool top_level = false) {
    switch (t.kind()) {
      case ExprKind::Var: return t.var_id();
      case ExprKind::Const: return extend_const(d_, t.value());
      case ExprKind::Neg: return tc(Expr::bin(BinOp::Sub, Expr::constant(0), t.child(0)), out);
      case ExprKind::Member: return member(t, out, top_level);
      case ExprKind::Abs: {
        const VarId x = tc(t.child(0), out);
        const VarId y = tc(Expr::bin(BinOp::Sub, Expr::constant(0), Expr::var(x)), out);
        const VarId z = tc(Expr::bin(BinOp::Max, Expr::var(x), Expr::var(y)), out);
        update(d_, z, Interval(0, POS_INF));
        return z;
      }
      case ExprKind::Bin: return binary(t, out);
      case ExprKind::Cmp: return comparison(t, out);
      case ExprKind::Not: return tc(Expr::cmp(CmpOp::Eq, t.child(0), Expr::constant(0)), out);
      case ExprKind::Implies: return tc(Expr::lor(Expr::lnot(t.child(0)), t.child(1)), out);
      case ExprKind::And: return connective(TcnOp::Min, t, out);
      case ExprKind::Or: return connective(TcnOp::Max, t, out);
      case ExprKind::Iff: return connective(TcnOp::Eq, t, out);
      case ExprKind::Xor: {
        const VarId b1 = booleanize(t.child(0), out);
        const VarId b2 = booleanize(t.child(1), out);
        return tc(Expr::cmp(CmpOp::Ne, Expr::var(b1), Expr::var(b2)), out);
      }
    }
    return 0;
  }

  /// Like tc, but guarantees a result in [0,1] that is 1 exactly when t != 0.
  VarId booleanize(const Expr& t, std::vector<TernaryConstraint>& out) {
    const VarId x = tc(t, out);
    if (d_[x].subset_of(Interval::boolean())) return x;
    return tc(Expr::cmp(CmpOp::Ne, Expr::var(x), Expr::constant(0)), out);
  }

 private:
  VarId fresh_var(Interval itv) {
    std::size_t used = 0;
    std::string name = fresh(d_, next_aux_, &used);
    next_aux_ = used + 1;
    return d_.add(std::move(name), itv);
  }

  VarId emit(TcnOp op, const Expr& a, const Expr& b, std::vector<TernaryConstraint>& out) {
    const VarId x = fresh_var(is_reified(op) ? Interval::boolean() : Interval::top());
    const VarId y = tc(a, out);
    const VarId z = tc(b, out);
    out.push_back({x, op, y, z});
    return x;
  }

  VarId binary(const Expr& t, std::vector<TernaryConstraint>& out) {
    const Expr& a = t.child(0);
    const Expr& b = t.child(1);
    switch (t.bin_op()) {
      case BinOp::Add: return emit(TcnOp::Add, a, b, out);
      case BinOp::Mul: return emit(TcnOp::Mul, a, b, out);
      case BinOp::Div: return emit(TcnOp::Div, a, b, out);
      case BinOp::Mod: return emit(TcnOp::Mod, a, b, out);
      case BinOp::Min: return emit(TcnOp::Min, a, b, out);
      case BinOp::Max: return emit(TcnOp::Max, a, b, out);
      case BinOp::Sub: {
        // x = a - b is encoded as a = x + b.
        const VarId x = fresh_var(Interval::top());
        const VarId y = tc(a, out);
        const VarId z = tc(b, out);
        out.push_back({y, TcnOp::Add, x, z});
        return x;
      }
    }
    return 0;
  }

  VarId comparison(const Expr& t, std::vector<TernaryConstraint>& out) {
    const Expr& a = t.child(0);
    const Expr& b = t.child(1);
    auto minus_one = [](const Expr& e) { return Expr::bin(BinOp::Sub, e, Expr::constant(1)); };
    switch (t.cmp_op()) {
      case CmpOp::Eq: return emit(TcnOp::Eq, a, b, out);
      case CmpOp::Le: return emit(TcnOp::Le, a, b, out);
      case CmpOp::Ge: return tc(Expr::cmp(CmpOp::Le, b, a), out);
      case CmpOp::Gt: return tc(Expr::cmp(CmpOp::Le, b, minus_one(a)), out);
      case CmpOp::Lt: return tc(Expr::cmp(CmpOp::Le, a, minus_one(b)), out);
      case CmpOp::Ne: {
        const VarId zero = extend_const(d_, 0);
        return tc(Expr::iff(Expr::var(zero), Expr::cmp(CmpOp::Eq, a, b)), out);
      }
    }
    return 0;
  }

  VarId connective(TcnOp op, const Expr& t, std::vector<TernaryConstraint>& out) {
    const VarId b = fresh_var(Interval::boolean());
    const VarId b1 = booleanize(t.child(0), out);
    const VarId b2 = booleanize(t.child(1), out);
    out.push_back({b, op, b1, b2});
    return b;
  }

  VarId member(const Expr& t, std::vector<TernaryConstraint>& out, bool top_level) {
    const VarId x = tc(t.child(0), out);
    const auto& s = t.set();
    // The hull is implied only when the membership is itself activated; under
    // a negation or disjunction x may legitimately lie outside it.
    if (top_level) update(d_, x, Interval(s.front(), s.back()));
    std::optional<Expr> disj;
    for (const Interval& i : itvs(s)) {
      Expr in = Expr::land(Expr::cmp(CmpOp::Ge, Expr::var(x), Expr::constant(i.lb())),
                           Expr::cmp(CmpOp::Le, Expr::var(x), Expr::constant(i.ub())));
      disj = disj ? Expr::lor(*disj, in) : in;
    }
    return tc(*disj, out);
  }

  DomainStore& d_;
  std::size_t next_aux_ = 0;
};

struct TcResult {
  std::vector<TernaryConstraint> constraints;
  VarId var;
};

/// Single-term rewriting over a store (allocates into d).
inline TcResult tc(DomainStore& d, const Expr& t) {
  TcResult r{};
  r.var = Decomposer(d).tc(t, r.constraints);
  return r;
}

inline TcResult booleanize(DomainStore& d, const Expr& t) {
  TcResult r{};
  r.var = Decomposer(d).booleanize(t, r.constraints);
  return r;
}

/// Decomposes every constraint in declaration order and activates its
/// reification variable.
inline TcnNetwork tcn(const SourceNetwork& net) {
  TcnNetwork out;
  out.domains = net.domains;
  out.objective = net.objective;
  for (VarId x = 0; x < net.domains.size(); ++x) out.original_vars.push_back(x);
  Decomposer dec(out.domains);
  for (const auto& c : net.constraints) {
    const VarId x = dec.tc(c, out.constraints, true);
    update(out.domains, x, Interval::singleton(1));
  }
  return out;
}

}  // namespace tcn

#endif
