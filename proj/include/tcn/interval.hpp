#ifndef TCN_INTERVAL_HPP
#define TCN_INTERVAL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tcn/bounds.hpp"
#include "tcn/error.hpp"

namespace tcn {

/// Number of integers in an interval, or infinite.
struct Cardinality {
  bool infinite = false;
  std::uint64_t count = 0;

  static constexpr Cardinality of(std::uint64_t n) { return {false, n}; }
  static constexpr Cardinality unbounded() { return {true, 0}; }

  friend constexpr bool operator==(const Cardinality&, const Cardinality&) = default;
  friend constexpr bool operator<(const Cardinality& a, const Cardinality& b) {
    if (a.infinite != b.infinite) return b.infinite;
    return !a.infinite && a.count < b.count;
  }
};

/// Integer interval [lo, hi] with possibly infinite bounds. There is a single
/// canonical empty interval, so equality is structural.
class Interval {
 public:
  /// The full interval [-inf, +inf].
  constexpr Interval() = default;

  constexpr Interval(bound_t lo, bound_t hi) : lo_(lo), hi_(hi) {
    if (lo_ > hi_ || lo_ == POS_INF || hi_ == NEG_INF) {
      lo_ = POS_INF;
      hi_ = NEG_INF;
    }
  }

  static constexpr Interval top() { return {}; }
  static constexpr Interval empty() { return {POS_INF, NEG_INF}; }
  static constexpr Interval singleton(bound_t v) { return {v, v}; }
  static constexpr Interval boolean() { return {0, 1}; }

  constexpr bound_t lb() const { return lo_; }
  constexpr bound_t ub() const { return hi_; }

  constexpr bool is_empty() const { return lo_ > hi_; }
  constexpr bool is_singleton() const { return lo_ == hi_ && tcn::is_finite(lo_); }
  constexpr bool is_finite() const { return !is_empty() && tcn::is_finite(lo_) && tcn::is_finite(hi_); }
  constexpr bool is_top() const { return lo_ == NEG_INF && hi_ == POS_INF; }

  constexpr bool contains(bound_t v) const { return !is_empty() && lo_ <= v && v <= hi_; }

  /// Inclusion order; the empty interval is below everything.
  constexpr bool subset_of(const Interval& o) const {
    return is_empty() || (!o.is_empty() && o.lo_ <= lo_ && hi_ <= o.hi_);
  }

  constexpr Interval intersect(const Interval& o) const {
    if (is_empty() || o.is_empty()) return empty();
    return {std::max(lo_, o.lo_), std::min(hi_, o.hi_)};
  }

  /// Smallest interval containing both.
  constexpr Interval hull(const Interval& o) const {
    if (is_empty()) return o;
    if (o.is_empty()) return *this;
    return {std::min(lo_, o.lo_), std::max(hi_, o.hi_)};
  }

  constexpr Interval negate() const {
    if (is_empty()) return empty();
    return {neg_bound(hi_), neg_bound(lo_)};
  }

  constexpr Cardinality size() const {
    if (is_empty()) return Cardinality::of(0);
    if (!is_finite()) return Cardinality::unbounded();
    return Cardinality::of(static_cast<std::uint64_t>(hi_) - static_cast<std::uint64_t>(lo_) + 1);
  }

  friend constexpr bool operator==(const Interval&, const Interval&) = default;

  std::string to_string() const {
    if (is_empty()) return "empty";
    return bound_to_string(lo_) + ".." + bound_to_string(hi_);
  }

 private:
  bound_t lo_ = NEG_INF;
  bound_t hi_ = POS_INF;
};

inline std::ostream& operator<<(std::ostream& os, const Interval& i) { return os << i.to_string(); }

constexpr Interval intersect(const Interval& a, const Interval& b) { return a.intersect(b); }
constexpr bool is_singleton(const Interval& i) { return i.is_singleton(); }
constexpr Cardinality lub_size(const Interval& i) { return i.size(); }

/// Dense variable identifier: the position of the variable in its store.
/// Ids order variables by creation, which is the total order used throughout.
using VarId = std::uint32_t;

/// Plain pointwise domain vector used by propagation and search.
using Domains = std::vector<Interval>;

/// d <= d' iff every domain of d is included in the matching domain of d'.
inline bool pointwise_leq(const Domains& a, const Domains& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].subset_of(b[i])) return false;
  }
  return true;
}

inline bool has_empty(const Domains& d) {
  for (const auto& i : d) {
    if (i.is_empty()) return true;
  }
  return false;
}

/// Named variables with their interval domains, in creation order.
class DomainStore {
 public:
  VarId add(std::string name, Interval itv = Interval::top()) {
    if (index_.contains(name)) throw Error(ErrorKind::DuplicateVariable, name);
    const auto id = static_cast<VarId>(names_.size());
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    domains_.push_back(itv);
    return id;
  }

  bool contains(std::string_view name) const { return index_.find(name) != index_.end(); }

  std::optional<VarId> find(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  VarId id(std::string_view name) const {
    auto found = find(name);
    if (!found) throw Error(ErrorKind::UnknownVariable, std::string(name));
    return *found;
  }

  const std::string& name(VarId x) const { return names_.at(x); }

  const Interval& operator[](VarId x) const { return domains_[x]; }
  Interval& operator[](VarId x) { return domains_[x]; }

  const Interval& at(VarId x) const {
    check(x);
    return domains_[x];
  }

  /// d(x) <- d(x) intersected with itv. Returns true when the domain shrank.
  bool update(VarId x, const Interval& itv) {
    check(x);
    const Interval next = domains_[x].intersect(itv);
    if (next == domains_[x]) return false;
    domains_[x] = next;
    return true;
  }

  bool update(std::string_view name, const Interval& itv) { return update(id(name), itv); }

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }

  const Domains& domains() const { return domains_; }
  Domains& domains() { return domains_; }
  const std::vector<std::string>& names() const { return names_; }

  bool has_empty() const { return tcn::has_empty(domains_); }

  /// Pointwise order. Both stores must declare the same variables.
  bool leq(const DomainStore& o) const { return names_ == o.names_ && pointwise_leq(domains_, o.domains_); }

  friend bool operator==(const DomainStore& a, const DomainStore& b) {
    return a.names_ == b.names_ && a.domains_ == b.domains_;
  }

 private:
  void check(VarId x) const {
    if (x >= names_.size()) throw Error(ErrorKind::UnknownVariable, "#" + std::to_string(x));
  }

  std::vector<std::string> names_;
  Domains domains_;
  std::map<std::string, VarId, std::less<>> index_;
};

}  // namespace tcn

#endif
