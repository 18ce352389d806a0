#ifndef TCN_MODEL_HPP
#define TCN_MODEL_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tcn/error.hpp"
#include "tcn/interval.hpp"

namespace tcn {

/// Names with this prefix are reserved for constant variables.
inline constexpr std::string_view kConstantPrefix = "__CONSTANT_";

enum class ExprKind { Var, Const, Neg, Abs, Member, Bin, Cmp, Not, And, Or, Implies, Iff, Xor };
enum class BinOp { Add, Sub, Mul, Div, Mod, Min, Max };
enum class CmpOp { Eq, Ne, Le, Lt, Ge, Gt };

/// Immutable, shareable expression tree over variables of a DomainStore.
class Expr {
 public:
  static Expr var(VarId x) { return make(ExprKind::Var, 0, x, 0, {}, {}); }
  static Expr constant(bound_t k) { return make(ExprKind::Const, 0, 0, k, {}, {}); }
  static Expr neg(Expr t) { return make(ExprKind::Neg, 0, 0, 0, {std::move(t)}, {}); }
  static Expr abs(Expr t) { return make(ExprKind::Abs, 0, 0, 0, {std::move(t)}, {}); }

  /// `t in S`. S is sorted and deduplicated; an empty S throws EmptySet.
  static Expr member(Expr t, std::vector<bound_t> set) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (set.empty()) throw Error(ErrorKind::EmptySet);
    return make(ExprKind::Member, 0, 0, 0, {std::move(t)}, std::move(set));
  }

  static Expr bin(BinOp op, Expr a, Expr b) {
    return make(ExprKind::Bin, static_cast<int>(op), 0, 0, {std::move(a), std::move(b)}, {});
  }
  static Expr cmp(CmpOp op, Expr a, Expr b) {
    return make(ExprKind::Cmp, static_cast<int>(op), 0, 0, {std::move(a), std::move(b)}, {});
  }
  static Expr lnot(Expr t) { return make(ExprKind::Not, 0, 0, 0, {std::move(t)}, {}); }
  static Expr land(Expr a, Expr b) { return logic(ExprKind::And, std::move(a), std::move(b)); }
  static Expr lor(Expr a, Expr b) { return logic(ExprKind::Or, std::move(a), std::move(b)); }
  static Expr implies(Expr a, Expr b) { return logic(ExprKind::Implies, std::move(a), std::move(b)); }
  static Expr iff(Expr a, Expr b) { return logic(ExprKind::Iff, std::move(a), std::move(b)); }
  static Expr lxor(Expr a, Expr b) { return logic(ExprKind::Xor, std::move(a), std::move(b)); }

  ExprKind kind() const { return node_->kind; }
  VarId var_id() const { return node_->var; }
  bound_t value() const { return node_->value; }
  BinOp bin_op() const { return static_cast<BinOp>(node_->op); }
  CmpOp cmp_op() const { return static_cast<CmpOp>(node_->op); }
  const std::vector<bound_t>& set() const { return node_->set; }
  std::span<const Expr> children() const { return node_->children; }
  const Expr& child(std::size_t i) const { return node_->children[i]; }

  /// Comparison, membership and logical nodes produce 0/1.
  bool is_boolean_valued() const {
    switch (kind()) {
      case ExprKind::Member:
      case ExprKind::Cmp:
      case ExprKind::Not:
      case ExprKind::And:
      case ExprKind::Or:
      case ExprKind::Implies:
      case ExprKind::Iff:
      case ExprKind::Xor:
        return true;
      default:
        return false;
    }
  }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    return x.kind == y.kind && x.op == y.op && x.var == y.var && x.value == y.value && x.set == y.set &&
           x.children == y.children;
  }

 private:
  struct Node {
    ExprKind kind;
    int op;
    VarId var;
    bound_t value;
    std::vector<Expr> children;
    std::vector<bound_t> set;
  };

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Expr make(ExprKind k, int op, VarId v, bound_t value, std::vector<Expr> children,
                   std::vector<bound_t> set) {
    return Expr(std::make_shared<const Node>(Node{k, op, v, value, std::move(children), std::move(set)}));
  }
  static Expr logic(ExprKind k, Expr a, Expr b) { return make(k, 0, 0, 0, {std::move(a), std::move(b)}, {}); }

  std::shared_ptr<const Node> node_;
};

struct Objective {
  enum class Kind { Satisfy, Minimize, Maximize };
  Kind kind = Kind::Satisfy;
  VarId var = 0;

  static Objective satisfy() { return {}; }
  static Objective minimize(VarId x) { return {Kind::Minimize, x}; }
  static Objective maximize(VarId x) { return {Kind::Maximize, x}; }
  bool is_optimization() const { return kind != Kind::Satisfy; }

  friend bool operator==(const Objective&, const Objective&) = default;
};

/// Source constraint network: domains, top-level Boolean constraints, objective.
struct SourceNetwork {
  DomainStore domains;
  std::vector<Expr> constraints;
  Objective objective;
};

// ---------------------------------------------------------------------------

namespace detail {
inline void collect_scope(const Expr& t, std::set<VarId>& out) {
  if (t.kind() == ExprKind::Var) {
    out.insert(t.var_id());
    return;
  }
  for (const auto& c : t.children()) collect_scope(c, out);
}
}  // namespace detail

/// Variables occurring in t.
inline std::set<VarId> scope(const Expr& t) {
  std::set<VarId> out;
  detail::collect_scope(t, out);
  return out;
}

/// Maximal disjoint intervals covering S, ascending.
inline std::vector<Interval> itvs(std::span<const bound_t> values) {
  if (values.empty()) throw Error(ErrorKind::EmptySet);
  std::vector<bound_t> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::vector<Interval> out;
  bound_t lo = s.front();
  bound_t hi = s.front();
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] == hi + 1) {
      hi = s[i];
    } else {
      out.emplace_back(lo, hi);
      lo = hi = s[i];
    }
  }
  out.emplace_back(lo, hi);
  return out;
}

inline std::vector<Interval> itvs(std::initializer_list<bound_t> values) {
  return itvs(std::span<const bound_t>(values.begin(), values.size()));
}

// ---------------------------------------------------------------------------
// Reference evaluator.

namespace detail {

inline bound_t checked(detail::wide_t w) {
  if (w < MIN_FINITE || w > MAX_FINITE) throw Error(ErrorKind::Overflow);
  return static_cast<bound_t>(w);
}

inline std::optional<bound_t> eval_rec(std::span<const bound_t> asn, const Expr& t) {
  using W = detail::wide_t;
  auto sub = [&](std::size_t i) { return eval_rec(asn, t.child(i)); };
  auto truth = [](bound_t v) -> bound_t { return v != 0 ? 1 : 0; };

  switch (t.kind()) {
    case ExprKind::Var: return asn[t.var_id()];
    case ExprKind::Const: return t.value();
    case ExprKind::Neg: {
      auto a = sub(0);
      if (!a) return std::nullopt;
      return checked(-W(*a));
    }
    case ExprKind::Abs: {
      auto a = sub(0);
      if (!a) return std::nullopt;
      return checked(*a < 0 ? -W(*a) : W(*a));
    }
    case ExprKind::Member: {
      auto a = sub(0);
      if (!a) return std::nullopt;
      return std::binary_search(t.set().begin(), t.set().end(), *a) ? 1 : 0;
    }
    case ExprKind::Not: {
      auto a = sub(0);
      if (!a) return std::nullopt;
      return *a == 0 ? 1 : 0;
    }
    default: break;
  }

  // Binary nodes: both sides are always evaluated, an undefined operand makes
  // the whole constraint undefined.
  auto a = sub(0);
  auto b = sub(1);
  if (!a || !b) return std::nullopt;
  const bound_t x = *a;
  const bound_t y = *b;

  switch (t.kind()) {
    case ExprKind::Bin:
      switch (t.bin_op()) {
        case BinOp::Add: return checked(W(x) + W(y));
        case BinOp::Sub: return checked(W(x) - W(y));
        case BinOp::Mul: return checked(W(x) * W(y));
        case BinOp::Div:
          if (y == 0) return std::nullopt;
          return checked(W(x) / W(y));
        case BinOp::Mod:
          if (y == 0) return std::nullopt;
          return euclid_mod(x, y);
        case BinOp::Min: return std::min(x, y);
        case BinOp::Max: return std::max(x, y);
      }
      break;
    case ExprKind::Cmp:
      switch (t.cmp_op()) {
        case CmpOp::Eq: return x == y;
        case CmpOp::Ne: return x != y;
        case CmpOp::Le: return x <= y;
        case CmpOp::Lt: return x < y;
        case CmpOp::Ge: return x >= y;
        case CmpOp::Gt: return x > y;
      }
      break;
    case ExprKind::And: return truth(x) & truth(y);
    case ExprKind::Or: return truth(x) | truth(y);
    case ExprKind::Implies: return (1 - truth(x)) | truth(y);
    case ExprKind::Iff: return truth(x) == truth(y);
    case ExprKind::Xor: return truth(x) != truth(y);
    default: break;
  }
  return std::nullopt;
}

}  // namespace detail

/// Value of t under a total assignment indexed by VarId. std::nullopt means
/// undefined: some division or modulus by zero occurred anywhere in t.
inline std::optional<bound_t> eval(std::span<const bound_t> asn, const Expr& t) {
  return detail::eval_rec(asn, t);
}

/// A top-level constraint holds when it evaluates to a defined non-zero value.
inline bool satisfies(std::span<const bound_t> asn, const Expr& c) {
  auto v = eval(asn, c);
  return v && *v != 0;
}

/// asn lies in the domains and satisfies every constraint.
inline bool satisfies(std::span<const bound_t> asn, const SourceNetwork& net) {
  for (VarId x = 0; x < net.domains.size(); ++x) {
    if (!net.domains[x].contains(asn[x])) return false;
  }
  for (const auto& c : net.constraints) {
    if (!satisfies(asn, c)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Rendering in the concrete model syntax. Every compound operand is
// parenthesized, so parsing the output yields the same tree.

inline std::string_view to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "mod";
    case BinOp::Min: return "min";
    case BinOp::Max: return "max";
  }
  return "?";
}

inline std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

inline std::string render(const Expr& t, const DomainStore& d) {
  auto operand = [&](const Expr& c) {
    const bool atom = c.kind() == ExprKind::Var || (c.kind() == ExprKind::Const && c.value() >= 0) ||
                      c.kind() == ExprKind::Abs || (c.kind() == ExprKind::Bin &&
                                                    (c.bin_op() == BinOp::Min || c.bin_op() == BinOp::Max));
    return atom ? render(c, d) : "(" + render(c, d) + ")";
  };
  auto infix = [&](std::string_view op) { return operand(t.child(0)) + " " + std::string(op) + " " + operand(t.child(1)); };

  switch (t.kind()) {
    case ExprKind::Var: return d.name(t.var_id());
    case ExprKind::Const: return std::to_string(t.value());
    case ExprKind::Neg: return "-(" + render(t.child(0), d) + ")";
    case ExprKind::Abs: return "abs(" + render(t.child(0), d) + ")";
    case ExprKind::Member: {
      std::string s = operand(t.child(0)) + " in {";
      for (std::size_t i = 0; i < t.set().size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(t.set()[i]);
      }
      return s + "}";
    }
    case ExprKind::Bin:
      if (t.bin_op() == BinOp::Min || t.bin_op() == BinOp::Max) {
        return std::string(to_string(t.bin_op())) + "(" + render(t.child(0), d) + ", " + render(t.child(1), d) + ")";
      }
      return infix(to_string(t.bin_op()));
    case ExprKind::Cmp: return infix(to_string(t.cmp_op()));
    case ExprKind::Not: return "not " + operand(t.child(0));
    case ExprKind::And: return infix("/\\");
    case ExprKind::Or: return infix("\\/");
    case ExprKind::Implies: return infix("->");
    case ExprKind::Iff: return infix("<->");
    case ExprKind::Xor: return infix("xor");
  }
  return "?";
}

}  // namespace tcn

#endif
