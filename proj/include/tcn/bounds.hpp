#ifndef TCN_BOUNDS_HPP
#define TCN_BOUNDS_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>

namespace tcn {

/// Interval bounds are 64-bit integers where the two extreme values are
/// reserved for -inf and +inf. Finite values live in [MIN_FINITE, MAX_FINITE].
using bound_t = std::int64_t;

inline constexpr bound_t NEG_INF = std::numeric_limits<bound_t>::min();
inline constexpr bound_t POS_INF = std::numeric_limits<bound_t>::max();
inline constexpr bound_t MIN_FINITE = NEG_INF + 1;
inline constexpr bound_t MAX_FINITE = POS_INF - 1;

constexpr bool is_finite(bound_t b) { return b != NEG_INF && b != POS_INF; }

inline std::string bound_to_string(bound_t b) {
  if (b == NEG_INF) return "-inf";
  if (b == POS_INF) return "inf";
  return std::to_string(b);
}

/// Truncated division (rounds toward zero). Precondition: b != 0.
constexpr bound_t trunc_div(bound_t a, bound_t b) { return a / b; }

/// Euclidean modulus: the result lies in [0, |b|-1]. Precondition: b != 0.
constexpr bound_t euclid_mod(bound_t a, bound_t b) {
  const bound_t r = a % b;
  return r < 0 ? (b < 0 ? r - b : r + b) : r;
}

namespace detail {

using wide_t = __int128;

constexpr wide_t floor_div(wide_t a, wide_t b) {
  wide_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

constexpr wide_t ceil_div(wide_t a, wide_t b) {
  wide_t q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

/// Extended integer used while computing candidate bounds: either +-inf or a
/// 128-bit finite value (wide enough for any product of two finite bounds).
struct Ext {
  int inf = 0;  // -1, 0 or +1
  wide_t v = 0;

  static constexpr Ext of(bound_t b) {
    if (b == NEG_INF) return {-1, 0};
    if (b == POS_INF) return {1, 0};
    return {0, b};
  }
  static constexpr Ext finite(wide_t w) { return {0, w}; }

  constexpr int sign() const {
    if (inf != 0) return inf;
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
  }

  friend constexpr bool operator<(const Ext& a, const Ext& b) {
    if (a.inf != b.inf) return a.inf < b.inf;
    return a.inf == 0 && a.v < b.v;
  }
  friend constexpr bool operator==(const Ext& a, const Ext& b) {
    return a.inf == b.inf && (a.inf != 0 || a.v == b.v);
  }
};

constexpr Ext ext_min(Ext a, Ext b) { return b < a ? b : a; }
constexpr Ext ext_max(Ext a, Ext b) { return a < b ? b : a; }

constexpr Ext ext_neg(Ext a) { return {-a.inf, -a.v}; }

/// a + b; callers never mix opposite infinities.
constexpr Ext ext_add(Ext a, Ext b) {
  if (a.inf != 0) return a;
  if (b.inf != 0) return b;
  return Ext::finite(a.v + b.v);
}

/// a * b with the interval convention 0 * inf = 0.
constexpr Ext ext_mul(Ext a, Ext b) {
  const int sa = a.sign();
  const int sb = b.sign();
  if (sa == 0 || sb == 0) return Ext::finite(0);
  if (a.inf != 0 || b.inf != 0) return {sa * sb, 0};
  return Ext::finite(a.v * b.v);
}

/// floor(a / b) for b > 0 (b may be +inf, in which case the limit 0 is used).
constexpr Ext ext_floor_div(Ext a, Ext b) {
  if (b.inf != 0) return Ext::finite(0);
  if (a.inf != 0) return a;
  return Ext::finite(floor_div(a.v, b.v));
}

constexpr Ext ext_ceil_div(Ext a, Ext b) {
  if (b.inf != 0) return Ext::finite(0);
  if (a.inf != 0) return a;
  return Ext::finite(ceil_div(a.v, b.v));
}

constexpr Ext ext_trunc_div(Ext a, Ext b) {
  if (b.inf != 0) return Ext::finite(0);
  if (a.inf != 0) return {a.inf * b.sign(), 0};
  return Ext::finite(a.v / b.v);
}

/// Rounds an extended value to a representable lower bound. Values beyond the
/// finite range are weakened (never tightened), so the result stays sound.
constexpr bound_t to_lower(Ext e) {
  if (e.inf < 0) return NEG_INF;
  if (e.inf > 0) return MAX_FINITE;
  if (e.v < MIN_FINITE) return NEG_INF;
  if (e.v > MAX_FINITE) return MAX_FINITE;
  return static_cast<bound_t>(e.v);
}

constexpr bound_t to_upper(Ext e) {
  if (e.inf > 0) return POS_INF;
  if (e.inf < 0) return MIN_FINITE;
  if (e.v > MAX_FINITE) return POS_INF;
  if (e.v < MIN_FINITE) return MIN_FINITE;
  return static_cast<bound_t>(e.v);
}

}  // namespace detail

/// Saturating bound arithmetic. `lo` variants round toward -inf on overflow,
/// `hi` variants toward +inf.
constexpr bound_t add_lo(bound_t a, bound_t b) {
  return detail::to_lower(detail::ext_add(detail::Ext::of(a), detail::Ext::of(b)));
}
constexpr bound_t add_hi(bound_t a, bound_t b) {
  return detail::to_upper(detail::ext_add(detail::Ext::of(a), detail::Ext::of(b)));
}
constexpr bound_t neg_bound(bound_t a) {
  if (a == NEG_INF) return POS_INF;
  if (a == POS_INF) return NEG_INF;
  return -a;
}
constexpr bound_t sub_lo(bound_t a, bound_t b) { return add_lo(a, neg_bound(b)); }
constexpr bound_t sub_hi(bound_t a, bound_t b) { return add_hi(a, neg_bound(b)); }

}  // namespace tcn

#endif
