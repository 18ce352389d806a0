#ifndef TCN_EQUIVALENCE_HPP
#define TCN_EQUIVALENCE_HPP

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "tcn/error.hpp"
#include "tcn/interval.hpp"

namespace tcn {

/// Partition of variable ids into equivalence classes. The representative of
/// a class is always its smallest id.
class Partition {
 public:
  Partition() = default;

  /// Every id in [0, n) starts as its own class.
  explicit Partition(std::size_t n) { grow(n); }

  static Partition init(std::size_t n) { return Partition(n); }

  std::size_t size() const { return parent_.size(); }
  std::size_t num_classes() const { return classes_; }

  /// Adds id size() as a fresh singleton class.
  VarId add() {
    grow(size() + 1);
    return static_cast<VarId>(size() - 1);
  }

  /// Extends the partition with singleton classes up to n ids.
  void grow(std::size_t n) {
    for (std::size_t i = parent_.size(); i < n; ++i) {
      const auto id = static_cast<VarId>(i);
      parent_.push_back(id);
      rank_.push_back(0);
      min_.push_back(id);
      members_.push_back({id});
      ++classes_;
    }
  }

  VarId find(VarId x) const {
    check(x);
    VarId root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const VarId next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  /// min [x]_E
  VarId representative(VarId x) const { return min_[find(x)]; }

  bool same(VarId x, VarId y) const { return find(x) == find(y); }

  /// Unites [x] and [y]. Returns false when they were already one class.
  bool merge(VarId x, VarId y) {
    VarId a = find(x);
    VarId b = find(y);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    min_[a] = std::min(min_[a], min_[b]);
    auto& big = members_[a];
    auto& small = members_[b];
    if (big.size() < small.size()) big.swap(small);
    big.insert(big.end(), small.begin(), small.end());
    small.clear();
    small.shrink_to_fit();
    --classes_;
    return true;
  }

  /// Members of [x], ascending.
  std::vector<VarId> members(VarId x) const {
    std::vector<VarId> out = members_[find(x)];
    std::sort(out.begin(), out.end());
    return out;
  }

  /// All classes, each ascending, ordered by representative.
  std::vector<std::vector<VarId>> classes() const {
    std::vector<std::vector<VarId>> out;
    for (VarId x = 0; x < size(); ++x) {
      if (representative(x) == x) out.push_back(members(x));
    }
    return out;
  }

  /// Intersection of d(y) over y in [x].
  Interval domain(const Domains& d, VarId x) const {
    Interval out;
    for (VarId y : members_[find(x)]) out = out.intersect(d[y]);
    return out;
  }

  /// E <= E': every class of this partition includes some class of `o`.
  bool leq(const Partition& o) const {
    if (o.size() != size()) return false;
    for (VarId x = 0; x < size(); ++x) {
      if (!same(x, o.representative(x))) return false;
    }
    return true;
  }

  friend bool operator==(const Partition& a, const Partition& b) {
    if (a.size() != b.size()) return false;
    for (VarId x = 0; x < a.size(); ++x) {
      if (a.representative(x) != b.representative(x)) return false;
    }
    return true;
  }

 private:
  void check(VarId x) const {
    if (x >= parent_.size()) throw Error(ErrorKind::UnknownVariable, "#" + std::to_string(x));
  }

  mutable std::vector<VarId> parent_;
  std::vector<std::uint8_t> rank_;
  std::vector<VarId> min_;
  std::vector<std::vector<VarId>> members_;
  std::size_t classes_ = 0;
};

inline Partition init(std::size_t n) { return Partition(n); }

inline Partition merge(Partition e, VarId x, VarId y) {
  e.merge(x, y);
  return e;
}

/// d_E(x)
inline Interval dom_E(const Partition& e, const Domains& d, VarId x) { return e.domain(d, x); }

}  // namespace tcn

#endif
