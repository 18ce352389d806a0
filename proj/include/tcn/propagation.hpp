#ifndef TCN_PROPAGATION_HPP
#define TCN_PROPAGATION_HPP

#include <array>
#include <cstdint>
#include <deque>
#include <random>
#include <span>
#include <vector>

#include "tcn/interval.hpp"
#include "tcn/ternary.hpp"

namespace tcn {

/// New domains for (x, y, z) of `x = y op z`.
using Box = std::array<Interval, 3>;

namespace detail {

inline Interval from_ext(Ext lo, Ext hi) { return {to_lower(lo), to_upper(hi)}; }

inline Interval ext_hull(std::span<const Ext> vals) {
  Ext lo = vals[0];
  Ext hi = vals[0];
  for (const Ext& v : vals) {
    lo = ext_min(lo, v);
    hi = ext_max(hi, v);
  }
  return from_ext(lo, hi);
}

/// Hull of {a * b | a in A, b in B} (0 * inf = 0).
inline Interval mul_hull(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  const Ext al = Ext::of(a.lb()), au = Ext::of(a.ub()), bl = Ext::of(b.lb()), bu = Ext::of(b.ub());
  const Ext c[4] = {ext_mul(al, bl), ext_mul(al, bu), ext_mul(au, bl), ext_mul(au, bu)};
  return ext_hull(c);
}

inline Interval positive_part(const Interval& i) { return i.intersect(Interval(1, POS_INF)); }
inline Interval negative_part(const Interval& i) { return i.intersect(Interval(NEG_INF, -1)); }

/// Integer hull of the real quotients {a / b | a in A, b in B} for B > 0.
inline Interval real_div_pos(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  const Ext al = Ext::of(a.lb()), au = Ext::of(a.ub()), bl = Ext::of(b.lb()), bu = Ext::of(b.ub());
  const Ext lo[4] = {ext_ceil_div(al, bl), ext_ceil_div(al, bu), ext_ceil_div(au, bl), ext_ceil_div(au, bu)};
  const Ext hi[4] = {ext_floor_div(al, bl), ext_floor_div(al, bu), ext_floor_div(au, bl), ext_floor_div(au, bu)};
  Ext l = lo[0], h = hi[0];
  for (int i = 1; i < 4; ++i) {
    l = ext_min(l, lo[i]);
    h = ext_max(h, hi[i]);
  }
  return from_ext(l, h);
}

/// Integer hull of real quotients a / b with b ranging over B minus 0.
inline Interval real_div(const Interval& a, const Interval& b) {
  const Interval pos = real_div_pos(a, positive_part(b));
  const Interval neg = real_div_pos(a.negate(), negative_part(b).negate());
  return pos.hull(neg);
}

/// Hull of trunc(a / b) for b in B > 0.
inline Interval trunc_div_pos(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  const Ext al = Ext::of(a.lb()), au = Ext::of(a.ub()), bl = Ext::of(b.lb()), bu = Ext::of(b.ub());
  const Ext c[4] = {ext_trunc_div(al, bl), ext_trunc_div(al, bu), ext_trunc_div(au, bl), ext_trunc_div(au, bu)};
  return ext_hull(c);
}

inline Interval trunc_div_hull(const Interval& a, const Interval& b) {
  const Interval pos = trunc_div_pos(a, positive_part(b));
  const Interval neg = trunc_div_pos(a.negate(), negative_part(b).negate());
  return pos.hull(neg);
}

/// Removes 0 when it is an endpoint of i.
inline Interval strip_zero(Interval i) {
  if (i == Interval::singleton(0)) return Interval::empty();
  if (i.lb() == 0) return {1, i.ub()};
  if (i.ub() == 0) return {i.lb(), -1};
  return i;
}

inline Box all_empty() { return {Interval::empty(), Interval::empty(), Interval::empty()}; }

inline Box finish(Box b) {
  if (b[0].is_empty() || b[1].is_empty() || b[2].is_empty()) return all_empty();
  return b;
}

inline Box project_add(const Interval& x, const Interval& y, const Interval& z) {
  return {x.intersect({add_lo(y.lb(), z.lb()), add_hi(y.ub(), z.ub())}),
          y.intersect({sub_lo(x.lb(), z.ub()), sub_hi(x.ub(), z.lb())}),
          z.intersect({sub_lo(x.lb(), y.ub()), sub_hi(x.ub(), y.lb())})};
}

inline Box project_mul(const Interval& x, const Interval& y, const Interval& z) {
  Box out{x.intersect(mul_hull(y, z)), y, z};
  // y * z = x with z = 0 forces x = 0, and then y is free.
  if (!(x.contains(0) && z.contains(0))) out[1] = y.intersect(real_div(x, z));
  if (!(x.contains(0) && y.contains(0))) out[2] = z.intersect(real_div(x, y));
  return out;
}

inline Box project_div(const Interval& x, const Interval& y, const Interval& z) {
  const Interval nz = strip_zero(z);
  Box out{x.intersect(trunc_div_hull(y, nz)), y, nz};
  // trunc(y / z) = q bounds the real quotient y / z within q' below.
  const Interval q(x.lb() <= 0 ? sub_lo(x.lb(), 1) : x.lb(), x.ub() >= 0 ? add_hi(x.ub(), 1) : x.ub());
  if (x.is_empty() || nz.is_empty()) return all_empty();
  out[1] = y.intersect(mul_hull(q, nz));
  if (!q.contains(0)) out[2] = strip_zero(nz.intersect(real_div(y, q)));
  return out;
}

inline Box project_mod(const Interval& x, const Interval& y, const Interval& z) {
  const Interval nz = strip_zero(z);
  if (nz.is_empty() || x.is_empty() || y.is_empty()) return all_empty();
  if (y.is_singleton() && nz.is_singleton()) {
    return {x.intersect(Interval::singleton(euclid_mod(y.lb(), nz.lb()))), y, nz};
  }
  const bound_t m = std::max(neg_bound(nz.lb()), nz.ub());
  Interval xr(0, m == POS_INF ? POS_INF : m - 1);
  if (y.lb() >= 0) xr = xr.intersect({NEG_INF, y.ub()});
  Box out{x.intersect(xr), y, nz};
  // |z| > x >= lx, and a non-negative y is at least its remainder.
  const bound_t lx = std::max<bound_t>(x.lb(), 0);
  if (lx > 0) {
    Interval zr = nz;
    if (zr.lb() >= -lx && zr.lb() <= lx) zr = {lx == MAX_FINITE ? POS_INF : lx + 1, zr.ub()};
    if (!zr.is_empty() && zr.ub() >= -lx && zr.ub() <= lx) zr = {zr.lb(), -lx - 1};
    out[2] = zr;
    if (y.lb() >= 0 && y.lb() < lx) out[1] = Interval(lx, y.ub());
  }
  return out;
}

/// x = min(y, z), exact projections.
inline Box project_min(const Interval& x, const Interval& y, const Interval& z) {
  auto other = [&x](const Interval& self, const Interval& o) {
    // Either self = x <= o, or o = x < self.
    const Interval a = x.intersect(self).intersect({NEG_INF, o.ub()});
    const Interval ox = o.intersect(x);
    const Interval b = ox.is_empty() ? Interval::empty() : self.intersect({add_lo(ox.lb(), 1), POS_INF});
    return a.hull(b);
  };
  return {x.intersect({std::min(y.lb(), z.lb()), std::min(y.ub(), z.ub())}), other(y, z), other(z, y)};
}

inline Box project_max(const Interval& x, const Interval& y, const Interval& z) {
  const Box b = project_min(x.negate(), y.negate(), z.negate());
  return {b[0].negate(), b[1].negate(), b[2].negate()};
}

inline Interval reified(bool can_true, bool can_false) {
  if (can_true && can_false) return Interval::boolean();
  if (can_true) return Interval::singleton(1);
  if (can_false) return Interval::singleton(0);
  return Interval::empty();
}

inline Box project_eq(const Interval& x, const Interval& y, const Interval& z) {
  const bool can_true = !y.intersect(z).is_empty();
  const bool can_false = !(y.is_singleton() && y == z);
  const Interval xr = x.intersect(reified(can_true, can_false));
  Box out{xr, y, z};
  if (xr == Interval::singleton(1)) {
    out[1] = y.intersect(z);
    out[2] = out[1];
  } else if (xr == Interval::singleton(0)) {
    auto remove = [](const Interval& a, const Interval& b) {
      if (!b.is_singleton()) return a;
      if (a.lb() == b.lb()) return Interval(add_lo(a.lb(), 1), a.ub());
      if (a.ub() == b.lb()) return Interval(a.lb(), sub_hi(a.ub(), 1));
      return a;
    };
    out[1] = remove(y, z);
    out[2] = remove(z, y);
  }
  return out;
}

inline Box project_le(const Interval& x, const Interval& y, const Interval& z) {
  const bool can_true = !y.is_empty() && !z.is_empty() && y.lb() <= z.ub();
  const bool can_false = !y.is_empty() && !z.is_empty() && y.ub() > z.lb();
  const Interval xr = x.intersect(reified(can_true, can_false));
  Box out{xr, y, z};
  if (xr == Interval::singleton(1)) {
    out[1] = y.intersect({NEG_INF, z.ub()});
    out[2] = z.intersect({y.lb(), POS_INF});
  } else if (xr == Interval::singleton(0)) {
    out[1] = y.intersect({add_lo(z.lb(), 1), POS_INF});
    out[2] = z.intersect({NEG_INF, sub_hi(y.ub(), 1)});
  }
  return out;
}

}  // namespace detail

/// Bounds projection of `x = y op z` over the box (x, y, z). The result is
/// included in the input, contains every solution of the box, and is empty in
/// all three components as soon as one of them is empty.
inline Box project(TcnOp op, const Interval& x, const Interval& y, const Interval& z) {
  if (x.is_empty() || y.is_empty() || z.is_empty()) return detail::all_empty();
  Box b;
  switch (op) {
    case TcnOp::Add: b = detail::project_add(x, y, z); break;
    case TcnOp::Mul: b = detail::project_mul(x, y, z); break;
    case TcnOp::Div: b = detail::project_div(x, y, z); break;
    case TcnOp::Mod: b = detail::project_mod(x, y, z); break;
    case TcnOp::Min: b = detail::project_min(x, y, z); break;
    case TcnOp::Max: b = detail::project_max(x, y, z); break;
    case TcnOp::Eq: b = detail::project_eq(x, y, z); break;
    case TcnOp::Le: b = detail::project_le(x, y, z); break;
  }
  return detail::finish(b);
}

/// Applies the propagator of c to d. Returns the variables whose domain
/// changed, in (x, y, z) order without repetition.
inline std::vector<VarId> propagate_one(const TernaryConstraint& c, Domains& d) {
  const Box b = project(c.op, d[c.x], d[c.y], d[c.z]);
  std::vector<VarId> changed;
  const VarId vars[3] = {c.x, c.y, c.z};
  for (int i = 0; i < 3; ++i) {
    const Interval next = d[vars[i]].intersect(b[i]);
    if (next != d[vars[i]]) {
      d[vars[i]] = next;
      if (std::find(changed.begin(), changed.end(), vars[i]) == changed.end()) changed.push_back(vars[i]);
    }
  }
  return changed;
}

inline std::vector<VarId> propagate_one(const TernaryConstraint& c, DomainStore& d) {
  return propagate_one(c, d.domains());
}

enum class Schedule { Fifo, Lifo, Random };

struct PropagationOptions {
  Schedule schedule = Schedule::Fifo;
  std::uint64_t seed = 0;
  /// Upper bound on propagator executions; slowly converging bounds on
  /// unbounded domains stop here with a sound, not necessarily fixed, store.
  std::uint64_t max_steps = 50'000'000;
};

struct PropagationStats {
  std::uint64_t steps = 0;
  bool capped = false;
};

/// Worklist fixpoint over a fixed constraint list. Every propagator watches
/// the variables of its scope and is queued at most once while pending.
class PropagationEngine {
 public:
  PropagationEngine(std::span<const TernaryConstraint> constraints, std::size_t num_vars,
                    PropagationOptions opts = {})
      : constraints_(constraints.begin(), constraints.end()),
        watchers_(num_vars),
        pending_(constraints_.size(), false),
        opts_(opts),
        rng_(opts.seed) {
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
      const auto& c = constraints_[i];
      for (VarId v : {c.x, c.y, c.z}) {
        auto& w = watchers_[v];
        if (w.empty() || w.back() != i) w.push_back(i);
      }
    }
  }

  /// Runs every propagator to a common fixpoint. Returns false when a domain
  /// became empty.
  bool run(Domains& d) {
    for (std::size_t i = 0; i < constraints_.size(); ++i) push(i);
    return drain(d);
  }

  /// Runs to a fixpoint assuming only `changed` moved since the last one.
  bool run(Domains& d, std::span<const VarId> changed) {
    for (VarId v : changed) wake(v);
    return drain(d);
  }

  const PropagationStats& stats() const { return stats_; }

 private:
  void push(std::size_t i) {
    if (pending_[i]) return;
    pending_[i] = true;
    queue_.push_back(i);
  }

  void wake(VarId v) {
    for (std::size_t i : watchers_[v]) push(i);
  }

  std::size_t pop() {
    std::size_t i = 0;
    switch (opts_.schedule) {
      case Schedule::Fifo:
        i = queue_.front();
        queue_.pop_front();
        break;
      case Schedule::Lifo:
        i = queue_.back();
        queue_.pop_back();
        break;
      case Schedule::Random: {
        std::uniform_int_distribution<std::size_t> pick(0, queue_.size() - 1);
        const std::size_t k = pick(rng_);
        i = queue_[k];
        queue_[k] = queue_.back();
        queue_.pop_back();
        break;
      }
    }
    pending_[i] = false;
    return i;
  }

  bool drain(Domains& d) {
    while (!queue_.empty()) {
      if (stats_.steps >= opts_.max_steps) {
        stats_.capped = true;
        clear();
        return !has_empty(d);
      }
      ++stats_.steps;
      const std::size_t i = pop();
      const auto changed = propagate_one(constraints_[i], d);
      for (VarId v : changed) {
        if (d[v].is_empty()) {
          clear();
          return false;
        }
        wake(v);
      }
    }
    return true;
  }

  void clear() {
    for (std::size_t i : queue_) pending_[i] = false;
    queue_.clear();
  }

  std::vector<TernaryConstraint> constraints_;
  std::vector<std::vector<std::size_t>> watchers_;
  std::vector<bool> pending_;
  std::deque<std::size_t> queue_;
  PropagationOptions opts_;
  std::mt19937_64 rng_;
  PropagationStats stats_;
};

/// Greatest fixpoint of the propagators of C below d. On failure the store
/// holds at least one empty domain.
inline bool fixpoint(Domains& d, std::span<const TernaryConstraint> constraints, PropagationOptions opts = {}) {
  if (has_empty(d)) return false;
  PropagationEngine engine(constraints, d.size(), opts);
  return engine.run(d);
}

inline bool fixpoint(DomainStore& d, std::span<const TernaryConstraint> constraints, PropagationOptions opts = {}) {
  return fixpoint(d.domains(), constraints, opts);
}

}  // namespace tcn

#endif
