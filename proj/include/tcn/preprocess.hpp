#ifndef TCN_PREPROCESS_HPP
#define TCN_PREPROCESS_HPP

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tcn/decompose.hpp"
#include "tcn/equivalence.hpp"
#include "tcn/propagation.hpp"
#include "tcn/ternary.hpp"

namespace tcn {

/// The algebraic simplification arms, in matching order.
enum class AsRule : std::uint8_t {
  AddSelf,       // x = x + y
  AddZero,       // x = y + 0
  AddDouble,     // x = y + y
  MulSelfConst,  // x = x * k
  SquareConst,   // k = x * x
  MulOne,        // x = y * 1
  MulSelfSelf,   // x = x * x
  OneDivSelf,    // x = 1 / x
  ZeroDivSelf,   // x = 0 / x
  ConstDivSelf,  // k = x / x
  DivOne,        // x = y / 1
  DivSelf,       // x = x / x
  ModSelf,       // x = x mod x
  ModSelfConst,  // x = x mod k
  ConstModSelf,  // x = k mod x
  ZeroModSelf,   // 0 = x mod x
  MinSame,       // x = min(y, y)
  MaxSame,       // x = max(y, y)
  MinSelf,       // x = min(x, y)
  MaxSelf,       // x = max(x, y)
  EqTrue,        // 1 = (x = y)
  EqSame,        // x = (y = y)
  EqSelfConst,   // x = (x = k)
  LeSame,        // x = (y <= y)
  LeSelfConst,   // x = (x <= k)
  ConstLeSelf,   // x = (k <= x)
};

inline constexpr std::size_t kAsRuleCount = 26;

inline std::string_view pattern(AsRule r) {
  static constexpr std::string_view names[kAsRuleCount] = {
      "x = x + y",     "x = y + 0",     "x = y + y",      "x = x * k",        "k = x * x",
      "x = y * 1",     "x = x * x",     "x = 1 / x",      "x = 0 / x",        "k = x / x",
      "x = y / 1",     "x = x / x",     "x = x mod x",    "x = x mod k",      "x = k mod x",
      "0 = x mod x",   "x = min(y, y)", "x = max(y, y)",  "x = min(x, y)",    "x = max(x, y)",
      "1 = (x = y)",   "x = (y = y)",   "x = (x = k)",    "x = (y <= y)",     "x = (x <= k)",
      "x = (k <= x)",
  };
  return names[static_cast<std::size_t>(r)];
}

enum class Stage { Propagate, Simplify, Cse, MergeDomains, Entailment };

inline std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Propagate: return "propagate";
    case Stage::Simplify: return "simplify";
    case Stage::Cse: return "cse";
    case Stage::MergeDomains: return "merge-domains";
    case Stage::Entailment: return "entailment";
  }
  return "?";
}

struct TraceEvent {
  enum class Kind { Merge, Rewrite, Remove, Update };

  int pass = 0;
  Stage stage = Stage::Simplify;
  Kind kind = Kind::Remove;
  std::optional<AsRule> rule;
  /// The constraint as it stood in C when the event fired.
  std::string constraint;
  /// New constraint for rewrites, new domain for updates.
  std::string replacement;
  /// Class after a merge, ascending.
  std::vector<std::string> merged;
  /// The arm departs from the textbook action because that action loses or
  /// invents solutions.
  bool corrected = false;
};

inline std::string_view to_string(TraceEvent::Kind k) {
  switch (k) {
    case TraceEvent::Kind::Merge: return "merge";
    case TraceEvent::Kind::Rewrite: return "rewrite";
    case TraceEvent::Kind::Remove: return "remove";
    case TraceEvent::Kind::Update: return "update";
  }
  return "?";
}

struct PreprocessReport {
  int iterations = 0;
  std::size_t removed_simplified = 0;
  std::size_t removed_cse = 0;
  std::size_t removed_entailed = 0;
  std::size_t variables_added = 0;
  std::size_t variables_eliminated = 0;
  std::size_t variables_in = 0;
  std::size_t variables_out = 0;
  std::size_t constraints_in = 0;
  std::size_t constraints_out = 0;
  bool unsat = false;
  double elapsed_seconds = 0;
  std::vector<TraceEvent> trace;
};

/// Maps every variable of the network given to `preprocess` to the variable
/// standing for it afterwards.
struct Substitution {
  struct Entry {
    std::string name;
    /// min [x]_E, as an id of the input network.
    VarId representative = 0;
    /// Id of the representative in the output network, if it survived.
    std::optional<VarId> target;
    /// Final domain of the class.
    Interval domain;
  };
  std::vector<Entry> entries;

  VarId representative(VarId x) const { return entries.at(x).representative; }

  /// Value of input variable x under an assignment of the output network.
  /// Eliminated variables are unconstrained in their domain and take the value
  /// closest to 0.
  bound_t value(VarId x, std::span<const bound_t> asn) const {
    const Entry& e = entries.at(x);
    if (e.target) return asn[*e.target];
    return std::clamp<bound_t>(0, e.domain.lb() == NEG_INF ? MIN_FINITE : e.domain.lb(),
                               e.domain.ub() == POS_INF ? MAX_FINITE : e.domain.ub());
  }

  /// Identity over the variables of d.
  static Substitution identity(const DomainStore& d) {
    Substitution s;
    for (VarId x = 0; x < d.size(); ++x) s.entries.push_back({d.name(x), x, x, d[x]});
    return s;
  }
};

struct PreprocessResult {
  TcnNetwork network;
  Substitution substitution;
  PreprocessReport report;
};

namespace detail {

/// floor(sqrt(k)) for k >= 0, exact.
inline bound_t isqrt(bound_t k) {
  auto r = static_cast<wide_t>(std::sqrt(static_cast<long double>(k)));
  while (r * r > k) --r;
  while ((r + 1) * (r + 1) <= k) ++r;
  return static_cast<bound_t>(r);
}

inline std::vector<std::string> class_names(const Partition& e, const DomainStore& d, VarId x) {
  std::vector<std::string> out;
  for (VarId y : e.members(x)) out.push_back(d.name(y));
  return out;
}

/// Entailment on the three domains of c, assuming none is empty.
inline bool entailed_on(const TernaryConstraint& c, const Interval& x, const Interval& y, const Interval& z) {
  if (x.is_singleton() && y.is_singleton() && z.is_singleton()) return holds(c.op, x.lb(), y.lb(), z.lb());
  const Interval one = Interval::singleton(1);
  const Interval zero = Interval::singleton(0);
  switch (c.op) {
    case TcnOp::Le:
      return (x == one && y.ub() <= z.lb()) || (x == zero && y.lb() > z.ub());
    case TcnOp::Eq:
      return x == zero && y.intersect(z).is_empty();
    default:
      return false;
  }
}

}  // namespace detail

/// Whether every assignment of gamma(d) satisfies c. Sound but incomplete; an
/// empty store entails everything.
inline bool is_entailed(const Domains& d, const TernaryConstraint& c) {
  if (has_empty(d)) return true;
  return detail::entailed_on(c, d[c.x], d[c.y], d[c.z]);
}

inline bool is_entailed(const DomainStore& d, const TernaryConstraint& c) { return is_entailed(d.domains(), c); }

/// Preprocessing state <d, C, E> with the pipeline functions acting on it.
class Preprocessor {
 public:
  explicit Preprocessor(TcnNetwork net, bool record_trace = true)
      : d_(std::move(net.domains)),
        constraints_(std::move(net.constraints)),
        original_(std::move(net.original_vars)),
        objective_(net.objective),
        e_(d_.size()),
        record_(record_trace) {
    report_.variables_in = d_.size();
    report_.constraints_in = constraints_.size();
    const_var(2);
  }

  DomainStore& domains() { return d_; }
  const DomainStore& domains() const { return d_; }
  std::vector<TernaryConstraint>& constraints() { return constraints_; }
  const std::vector<TernaryConstraint>& constraints() const { return constraints_; }
  Partition& partition() { return e_; }
  const Partition& partition() const { return e_; }
  PreprocessReport& report() { return report_; }

  /// d_E(x)
  Interval dom(VarId x) const { return e_.domain(d_.domains(), x); }

  /// Normal form (see the free function nf): representatives substituted, commutative operands ordered
  /// by id, then a constant operand moved to the right.
  TernaryConstraint nf(const TernaryConstraint& c) const {
    TernaryConstraint n{e_.representative(c.x), c.op, e_.representative(c.y), e_.representative(c.z)};
    if (is_commutative(n.op)) {
      if (n.z < n.y) std::swap(n.y, n.z);
      if (constant(n.y) && !constant(n.z)) std::swap(n.y, n.z);
    }
    return n;
  }

  /// Root propagation. Returns false on failure.
  bool propagate() {
    const bool ok = fixpoint(d_, constraints_);
    restore_class_domains();
    return ok;
  }

  /// One pass of algebraic simplification over C in list order. Returns true
  /// when C changed.
  bool simplify() {
    restore_class_domains();
    std::vector<TernaryConstraint> out;
    out.reserve(constraints_.size());
    bool changed = false;
    for (const auto& c : constraints_) {
      switch (apply_rules(c, out)) {
        case Match::None: out.push_back(c); break;
        case Match::Kept: break;
        case Match::Changed: changed = true; break;
      }
    }
    constraints_ = std::move(out);
    return changed;
  }

  /// One backward sweep of common subexpression elimination. Returns the
  /// number of constraints removed.
  std::size_t icse_pass() {
    struct Key {
      TcnOp op;
      VarId lo, hi;
      bool operator==(const Key&) const = default;
    };
    struct KeyHash {
      std::size_t operator()(const Key& k) const {
        std::uint64_t h = (std::uint64_t{k.lo} << 32 | k.hi) * 0x9E3779B97F4A7C15ULL;
        h ^= (h >> 29) + static_cast<std::uint64_t>(k.op);
        return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ULL ^ (h >> 32));
      }
    };
    // At most one entry per operand orientation survives under a key.
    struct Slots {
      std::array<std::size_t, 2> at{};
      std::uint8_t n = 0;
    };
    std::unordered_map<Key, Slots, KeyHash> seen;
    seen.reserve(constraints_.size() * 2);
    std::vector<bool> removed(constraints_.size(), false);
    std::size_t count = 0;
    for (std::size_t i = constraints_.size(); i-- > 0;) {
      const auto& c = constraints_[i];
      const VarId y = e_.representative(c.y);
      const VarId z = e_.representative(c.z);
      auto& bucket = seen[Key{c.op, std::min(y, z), std::max(y, z)}];
      std::optional<std::size_t> match;
      for (std::uint8_t s = 0; s < bucket.n; ++s) {
        const std::size_t j = bucket.at[s];
        const auto& o = constraints_[j];
        const VarId oy = e_.representative(o.y);
        const VarId oz = e_.representative(o.z);
        if ((oy == y && oz == z) || (is_commutative(c.op) && oy == z && oz == y)) {
          match = j;
          break;
        }
      }
      if (!match) {
        bucket.at[bucket.n++] = i;
        continue;
      }
      const auto& kept = constraints_[*match];
      removed[i] = true;
      ++count;
      if (record_) {
        event(Stage::Cse, TraceEvent::Kind::Remove, std::nullopt, c, "");
      }
      merge(c.x, kept.x, Stage::Cse, std::nullopt, c);
    }
    if (count > 0) {
      std::vector<TernaryConstraint> out;
      out.reserve(constraints_.size() - count);
      for (std::size_t i = 0; i < constraints_.size(); ++i) {
        if (!removed[i]) out.push_back(constraints_[i]);
      }
      constraints_ = std::move(out);
      report_.removed_cse += count;
    }
    return count;
  }

  /// Common subexpression elimination to its fixpoint.
  std::size_t icse() {
    std::size_t total = 0;
    while (std::size_t n = icse_pass()) total += n;
    return total;
  }

  /// d(x) <- d_E(x) for all x.
  void merge_domains() {
    restore_class_domains();
    for (VarId x = 0; x < d_.size(); ++x) {
      const Interval next = d_[e_.representative(x)];
      if (next != d_[x]) {
        d_[x] = next;
        if (record_) {
          TraceEvent ev;
          ev.pass = pass_;
          ev.stage = Stage::MergeDomains;
          ev.kind = TraceEvent::Kind::Update;
          ev.constraint = d_.name(x);
          ev.replacement = next.to_string();
          report_.trace.push_back(std::move(ev));
        }
      }
    }
  }

  /// Greatest fixpoint of the inner pipeline.
  void run_fixpoint() {
    for (;;) {
      ++pass_;
      ++report_.iterations;
      const Domains before = d_.domains();
      const std::size_t classes = e_.num_classes();
      bool c_changed = false;
      if (!propagate()) break;
      c_changed |= simplify();
      if (d_.has_empty()) break;
      c_changed |= icse() > 0;
      merge_domains();
      if (d_.has_empty()) break;
      if (d_.domains() == before && e_.num_classes() == classes && !c_changed) break;
    }
    if (d_.has_empty()) merge_domains();
  }

  /// Drops every constraint entailed by d.
  void eliminate_entailed() {
    const bool bottom = d_.has_empty();
    std::vector<TernaryConstraint> out;
    for (const auto& c : constraints_) {
      if (bottom || detail::entailed_on(c, d_[c.x], d_[c.y], d_[c.z])) {
        ++report_.removed_entailed;
        if (record_) event(Stage::Entailment, TraceEvent::Kind::Remove, std::nullopt, c, "");
      } else {
        out.push_back(c);
      }
    }
    constraints_ = std::move(out);
  }

  /// Renames C through R, drops useless variables and packs the result.
  PreprocessResult finish(std::chrono::steady_clock::time_point start) {
    for (auto& c : constraints_) {
      c = {e_.representative(c.x), c.op, e_.representative(c.y), e_.representative(c.z)};
    }
    std::vector<bool> keep(d_.size(), false);
    for (const auto& c : constraints_) keep[c.x] = keep[c.y] = keep[c.z] = true;
    for (VarId x = 0; x < d_.size(); ++x) {
      if (d_[x].is_empty()) keep[x] = true;
    }
    if (objective_.is_optimization()) keep[e_.representative(objective_.var)] = true;

    std::vector<std::optional<VarId>> renamed(d_.size());
    PreprocessResult r;
    for (VarId x = 0; x < d_.size(); ++x) {
      if (keep[x]) renamed[x] = r.network.domains.add(d_.name(x), d_[x]);
    }
    for (const auto& c : constraints_) {
      r.network.constraints.push_back({*renamed[c.x], c.op, *renamed[c.y], *renamed[c.z]});
    }
    for (VarId x : original_) {
      if (renamed[x]) r.network.original_vars.push_back(*renamed[x]);
    }
    r.network.objective = objective_;
    if (objective_.is_optimization()) r.network.objective.var = *renamed[e_.representative(objective_.var)];

    for (VarId x = 0; x < d_.size(); ++x) {
      const VarId rep = e_.representative(x);
      r.substitution.entries.push_back({d_.name(x), rep, renamed[rep], d_[rep]});
    }

    report_.variables_out = r.network.domains.size();
    report_.variables_eliminated = d_.size() - report_.variables_out;
    report_.constraints_out = r.network.constraints.size();
    report_.unsat = d_.has_empty();
    report_.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.report = std::move(report_);
    return r;
  }

 private:
  // Relies on d(min [v]) = d_E(v), which holds between pipeline stages.
  bool constant(VarId v) const { return value(v).has_value(); }

  std::optional<bound_t> value(VarId v) const {
    const Interval& i = d_[e_.representative(v)];
    if (i.is_singleton()) return i.lb();
    return std::nullopt;
  }

  VarId const_var(bound_t k) {
    const std::size_t before = d_.size();
    const VarId v = extend_const(d_, k);
    if (d_.size() != before) {
      e_.grow(d_.size());
      ++report_.variables_added;
    }
    return v;
  }

  /// Keeps d(min [x]) equal to d_E(x) for every class.
  void restore_class_domains() {
    for (VarId x = 0; x < d_.size(); ++x) {
      const VarId r = e_.representative(x);
      if (r != x) d_[r] = d_[r].intersect(d_[x]);
    }
  }

  void event(Stage stage, TraceEvent::Kind kind, std::optional<AsRule> rule, const TernaryConstraint& c,
             std::string replacement, bool corrected = false) {
    TraceEvent ev;
    ev.pass = pass_;
    ev.stage = stage;
    ev.kind = kind;
    ev.rule = rule;
    ev.constraint = to_string(c, d_);
    ev.replacement = std::move(replacement);
    ev.corrected = corrected;
    report_.trace.push_back(std::move(ev));
  }

  void merge(VarId a, VarId b, Stage stage, std::optional<AsRule> rule, const TernaryConstraint& source) {
    const VarId ra = e_.representative(a);
    const VarId rb = e_.representative(b);
    if (!e_.merge(a, b)) return;
    const Interval both = d_[ra].intersect(d_[rb]);
    d_[e_.representative(a)] = both;
    if (record_) {
      TraceEvent ev;
      ev.pass = pass_;
      ev.stage = stage;
      ev.kind = TraceEvent::Kind::Merge;
      ev.rule = rule;
      ev.constraint = to_string(source, d_);
      ev.merged = detail::class_names(e_, d_, a);
      report_.trace.push_back(std::move(ev));
    }
  }

  void update(VarId v, const Interval& itv, AsRule rule, const TernaryConstraint& source, bool corrected) {
    const VarId r = e_.representative(v);
    const Interval next = d_[r].intersect(itv);
    if (next == d_[r]) return;
    d_[r] = next;
    if (record_) {
      event(Stage::Simplify, TraceEvent::Kind::Update, rule, source, d_.name(r) + " in " + next.to_string(),
            corrected);
    }
  }

  enum class Match { None, Kept, Changed };

  /// Matches nf(c) against the rule table. On None, c must pass through
  /// unchanged; otherwise the surviving constraint, if any, is already in out.
  Match apply_rules(const TernaryConstraint& c, std::vector<TernaryConstraint>& out) {
    const TernaryConstraint n = nf(c);
    const VarId x = n.x, y = n.y, z = n.z;
    const auto kx = value(x), ky = value(y), kz = value(z);
    std::optional<AsRule> rule;
    bool corrected = false;
    bool drop = true;
    std::optional<TernaryConstraint> rewrite;

    auto upd = [&](VarId v, Interval itv) { update(v, itv, *rule, c, corrected); };
    auto mrg = [&](VarId a, VarId b) { merge(a, b, Stage::Simplify, rule, c); };
    // Commutative arms are tried in both operand orders.
    auto self_other = [&]() -> std::optional<VarId> {
      if (y == x) return z;
      if (z == x) return y;
      return std::nullopt;
    };

    switch (n.op) {
      case TcnOp::Add:
        if (auto o = self_other()) {
          rule = AsRule::AddSelf;
          upd(*o, Interval::singleton(0));
        } else if (kz == 0 || ky == 0) {
          rule = AsRule::AddZero;
          mrg(x, kz == 0 ? y : z);
        } else if (y == z) {
          rule = AsRule::AddDouble;
          rewrite = TernaryConstraint{x, TcnOp::Mul, y, const_var(2)};
        }
        break;
      case TcnOp::Mul:
        if ((y == x && kz) || (z == x && ky)) {
          rule = AsRule::MulSelfConst;
          const bound_t k = (y == x && kz) ? *kz : *ky;
          if (k != 1) upd(x, Interval::singleton(0));
        } else if (kx && y == z) {
          rule = AsRule::SquareConst;
          const bound_t k = *kx;
          const bound_t s = k >= 0 ? detail::isqrt(k) : -1;
          if (s >= 0 && detail::wide_t(s) * s == k) {
            upd(y, Interval(-s, s));
            drop = false;
          } else {
            upd(y, Interval::empty());
          }
        } else if (kz == 1 || ky == 1) {
          rule = AsRule::MulOne;
          mrg(x, kz == 1 ? y : z);
        } else if (x == y && y == z) {
          rule = AsRule::MulSelfSelf;
          upd(x, Interval::boolean());
        }
        break;
      case TcnOp::Div:
        if (ky == 1 && z == x) {
          rule = AsRule::OneDivSelf;
          upd(x, Interval(-1, 1));
          drop = false;
        } else if (ky == 0 && z == x) {
          rule = AsRule::ZeroDivSelf;
          upd(x, Interval::empty());
        } else if (kx && y == z) {
          rule = AsRule::ConstDivSelf;
          if (*kx == 1) {
            drop = false;
          } else {
            upd(y, Interval::empty());
          }
        } else if (kz == 1) {
          rule = AsRule::DivOne;
          mrg(x, y);
        } else if (x == y && y == z) {
          rule = AsRule::DivSelf;
          upd(x, Interval::singleton(1));
        }
        break;
      case TcnOp::Mod:
        if (x == y && y == z) {
          // x mod x is 0 for x != 0 and undefined at 0.
          rule = AsRule::ModSelf;
          corrected = true;
          upd(x, Interval::empty());
        } else if (y == x && kz) {
          rule = AsRule::ModSelfConst;
          const detail::wide_t m = *kz < 0 ? -detail::wide_t(*kz) : detail::wide_t(*kz);
          upd(x, Interval(0, static_cast<bound_t>(m - 1)));
        } else if (ky && z == x) {
          rule = AsRule::ConstModSelf;
          upd(x, Interval::empty());
        } else if (kx == 0 && y == z) {
          // 0 = x mod x holds exactly when x != 0.
          rule = AsRule::ZeroModSelf;
          corrected = true;
          const Interval dx = dom(y);
          if (dx.lb() == 0) {
            upd(y, Interval(1, POS_INF));
          } else if (dx.ub() == 0) {
            upd(y, Interval(NEG_INF, -1));
          } else if (dx.contains(0)) {
            drop = false;
          }
        }
        break;
      case TcnOp::Min:
      case TcnOp::Max: {
        const bool is_min = n.op == TcnOp::Min;
        if (y == z) {
          rule = is_min ? AsRule::MinSame : AsRule::MaxSame;
          mrg(x, y);
        } else if (auto o = self_other()) {
          rule = is_min ? AsRule::MinSelf : AsRule::MaxSelf;
          const VarId one = const_var(1);
          rewrite = is_min ? TernaryConstraint{one, TcnOp::Le, x, *o} : TernaryConstraint{one, TcnOp::Le, *o, x};
        }
        break;
      }
      case TcnOp::Eq:
        if (kx == 1) {
          rule = AsRule::EqTrue;
          mrg(y, z);
        } else if (y == z) {
          rule = AsRule::EqSame;
          upd(x, Interval::singleton(1));
        } else if ((y == x && kz) || (z == x && ky)) {
          rule = AsRule::EqSelfConst;
          const bound_t k = (y == x && kz) ? *kz : *ky;
          if (k == 0) {
            upd(x, Interval::empty());
          } else if (k == 1) {
            // x = (x = 1) holds for both x = 0 and x = 1.
            corrected = true;
            upd(x, Interval::boolean());
          } else {
            upd(x, Interval::singleton(0));
          }
        }
        break;
      case TcnOp::Le:
        if (y == z) {
          rule = AsRule::LeSame;
          upd(x, Interval::singleton(1));
        } else if (y == x && kz) {
          rule = AsRule::LeSelfConst;
          if (*kz == 0) {
            upd(x, Interval::empty());
          } else if (*kz > 0) {
            upd(x, Interval::singleton(1));
          } else {
            upd(x, Interval::singleton(0));
          }
        } else if (z == x && ky) {
          rule = AsRule::ConstLeSelf;
          if (*ky == 1) {
            // Both 0 and 1 satisfy x = (1 <= x); other values of x do not.
            corrected = true;
            upd(x, Interval::boolean());
          } else if (*ky < 1) {
            upd(x, Interval::singleton(1));
          } else {
            upd(x, Interval::singleton(0));
          }
        }
        break;
    }

    if (!rule) return Match::None;
    if (!drop) {
      out.push_back(c);
      return Match::Kept;
    }
    if (rewrite) {
      out.push_back(*rewrite);
      if (record_) event(Stage::Simplify, TraceEvent::Kind::Rewrite, rule, c, to_string(*rewrite, d_), corrected);
    } else {
      ++report_.removed_simplified;
      if (record_) event(Stage::Simplify, TraceEvent::Kind::Remove, rule, c, "", corrected);
    }
    return Match::Changed;
  }

  DomainStore d_;
  std::vector<TernaryConstraint> constraints_;
  std::vector<VarId> original_;
  Objective objective_;
  Partition e_;
  PreprocessReport report_;
  int pass_ = 0;
  bool record_ = true;
};

/// Full pipeline: inner fixpoint, entailment, renaming, useless variables.
inline PreprocessResult preprocess(const TcnNetwork& net, bool record_trace = true) {
  const auto start = std::chrono::steady_clock::now();
  Preprocessor p(net, record_trace);
  p.run_fixpoint();
  p.eliminate_entailed();
  return p.finish(start);
}

inline TernaryConstraint nf(const Partition& e, const DomainStore& d, const TernaryConstraint& c) {
  auto rep = [&](VarId v) { return e.representative(v); };
  TernaryConstraint n{rep(c.x), c.op, rep(c.y), rep(c.z)};
  if (is_commutative(n.op)) {
    if (n.z < n.y) std::swap(n.y, n.z);
    if (e.domain(d.domains(), n.y).is_singleton() && !e.domain(d.domains(), n.z).is_singleton()) {
      std::swap(n.y, n.z);
    }
  }
  return n;
}

}  // namespace tcn

#endif
