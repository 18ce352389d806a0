#ifndef TCN_TERNARY_HPP
#define TCN_TERNARY_HPP

#include <algorithm>
#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcn/interval.hpp"
#include "tcn/model.hpp"

namespace tcn {

enum class TcnOp : std::uint8_t { Add, Mul, Div, Mod, Min, Max, Eq, Le };

inline constexpr std::array<TcnOp, 8> kAllOps = {TcnOp::Add, TcnOp::Mul, TcnOp::Div, TcnOp::Mod,
                                                 TcnOp::Min, TcnOp::Max, TcnOp::Eq,  TcnOp::Le};

/// Operators whose result is a 0/1 reification.
constexpr bool is_reified(TcnOp op) { return op == TcnOp::Eq || op == TcnOp::Le; }

/// The commutative set: +, *, min, max, =.
constexpr bool is_commutative(TcnOp op) {
  return op == TcnOp::Add || op == TcnOp::Mul || op == TcnOp::Min || op == TcnOp::Max || op == TcnOp::Eq;
}

inline std::string_view to_token(TcnOp op) {
  switch (op) {
    case TcnOp::Add: return "add";
    case TcnOp::Mul: return "mul";
    case TcnOp::Div: return "div";
    case TcnOp::Mod: return "mod";
    case TcnOp::Min: return "min";
    case TcnOp::Max: return "max";
    case TcnOp::Eq: return "eq";
    case TcnOp::Le: return "le";
  }
  return "?";
}

/// x = y <op> z
struct TernaryConstraint {
  VarId x;
  TcnOp op;
  VarId y;
  VarId z;

  friend bool operator==(const TernaryConstraint&, const TernaryConstraint&) = default;
};

struct TcnNetwork {
  DomainStore domains;
  std::vector<TernaryConstraint> constraints;
  /// Variables of the source model, in declaration order.
  std::vector<VarId> original_vars;
  Objective objective;
};

/// Whether the triple (x, y, z) belongs to rel(x = y op z). Division and
/// modulus by zero never hold; eq and le only hold for a 0/1 result.
inline bool holds(TcnOp op, bound_t x, bound_t y, bound_t z) {
  using W = detail::wide_t;
  switch (op) {
    case TcnOp::Add: return W(x) == W(y) + W(z);
    case TcnOp::Mul: return W(x) == W(y) * W(z);
    case TcnOp::Div: return z != 0 && x == trunc_div(y, z);
    case TcnOp::Mod: return z != 0 && x == euclid_mod(y, z);
    case TcnOp::Min: return x == std::min(y, z);
    case TcnOp::Max: return x == std::max(y, z);
    case TcnOp::Eq: return x == (y == z ? 1 : 0);
    case TcnOp::Le: return x == (y <= z ? 1 : 0);
  }
  return false;
}

inline bool holds(const TernaryConstraint& c, std::span<const bound_t> asn) {
  return holds(c.op, asn[c.x], asn[c.y], asn[c.z]);
}

inline std::string to_string(const TernaryConstraint& c, const DomainStore& d) {
  return d.name(c.x) + " = " + d.name(c.y) + " " + std::string(to_token(c.op)) + " " + d.name(c.z);
}

/// `tcn-v1` text dump: header, one `var` line per variable, one `con` line per
/// constraint.
inline std::string dump(const TcnNetwork& net) {
  std::string out = "tcn-v1\n";
  const auto& d = net.domains;
  for (VarId x = 0; x < d.size(); ++x) {
    out += "var " + d.name(x) + " in " + d[x].to_string() + ";\n";
  }
  for (const auto& c : net.constraints) {
    out += "con " + to_string(c, d) + ";\n";
  }
  return out;
}

}  // namespace tcn

#endif
