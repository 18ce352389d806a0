#ifndef TCN_STATS_HPP
#define TCN_STATS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "tcn/decompose.hpp"
#include "tcn/frontend.hpp"
#include "tcn/preprocess.hpp"
#include "tcn/ternary.hpp"

namespace tcn {

/// Histogram rows: the six arithmetic operators, then eq and le each split
/// by the domain of their result variable.
enum class OpRow : std::uint8_t {
  Add, Mul, Div, Mod, Min, Max,
  Eq, EqFalse, EqTrue,
  Le, LeFalse, LeTrue,
};

inline constexpr std::size_t kOpRowCount = 12;

inline std::string_view to_string(OpRow r) {
  static constexpr std::string_view names[kOpRowCount] = {
      "add", "mul", "div", "mod", "min", "max", "eq", "eq_false", "eq_true", "le", "le_false", "le_true",
  };
  return names[static_cast<std::size_t>(r)];
}

inline OpRow classify(const TernaryConstraint& c, const DomainStore& d) {
  auto split = [&](OpRow free, OpRow f, OpRow t) {
    const Interval& x = d[c.x];
    if (x == Interval::singleton(0)) return f;
    if (x == Interval::singleton(1)) return t;
    return free;
  };
  switch (c.op) {
    case TcnOp::Add: return OpRow::Add;
    case TcnOp::Mul: return OpRow::Mul;
    case TcnOp::Div: return OpRow::Div;
    case TcnOp::Mod: return OpRow::Mod;
    case TcnOp::Min: return OpRow::Min;
    case TcnOp::Max: return OpRow::Max;
    case TcnOp::Eq: return split(OpRow::Eq, OpRow::EqFalse, OpRow::EqTrue);
    case TcnOp::Le: return split(OpRow::Le, OpRow::LeFalse, OpRow::LeTrue);
  }
  return OpRow::Add;
}

struct NetworkStats {
  std::size_t variables = 0;
  std::size_t constraints = 0;
  /// Empty for source networks.
  std::optional<std::array<std::size_t, kOpRowCount>> histogram;
};

inline NetworkStats stats_of(const SourceNetwork& net) { return {net.domains.size(), net.constraints.size(), {}}; }

inline NetworkStats stats_of(const TcnNetwork& net) {
  NetworkStats s{net.domains.size(), net.constraints.size(), std::array<std::size_t, kOpRowCount>{}};
  for (const auto& c : net.constraints) ++(*s.histogram)[static_cast<std::size_t>(classify(c, net.domains))];
  return s;
}

/// a / b, undefined when b is 0.
inline std::optional<double> ratio(std::size_t a, std::size_t b) {
  if (b == 0) return std::nullopt;
  return static_cast<double>(a) / static_cast<double>(b);
}

struct ModelStats {
  NetworkStats source;
  NetworkStats tcn;
  NetworkStats preprocessed;
  PreprocessReport report;

  std::optional<double> tcn_variable_ratio() const { return ratio(tcn.variables, source.variables); }
  std::optional<double> tcn_constraint_ratio() const { return ratio(tcn.constraints, source.constraints); }
  std::optional<double> preprocessed_variable_ratio() const {
    return ratio(preprocessed.variables, source.variables);
  }
  std::optional<double> preprocessed_constraint_ratio() const {
    return ratio(preprocessed.constraints, source.constraints);
  }
};

/// Sizes at the three stages. The source stage counts the model after unary
/// constraints are folded into domains.
inline ModelStats model_stats(const SourceNetwork& net) {
  ModelStats m;
  const SourceNetwork folded = unary_domain_fold(net);
  m.source = stats_of(folded);
  const TcnNetwork t = tcn(folded);
  m.tcn = stats_of(t);
  PreprocessResult p = preprocess(t, false);
  m.preprocessed = stats_of(p.network);
  m.report = std::move(p.report);
  return m;
}

struct Summary {
  std::size_t count = 0;
  double average = 0;
  double median = 0;
  /// Population standard deviation.
  double stddev = 0;
  double max = 0;
};

inline Summary summarize(std::vector<double> xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  std::sort(xs.begin(), xs.end());
  double sum = 0;
  for (double x : xs) sum += x;
  s.average = sum / static_cast<double>(xs.size());
  const std::size_t mid = xs.size() / 2;
  s.median = xs.size() % 2 == 1 ? xs[mid] : (xs[mid - 1] + xs[mid]) / 2;
  double sq = 0;
  for (double x : xs) sq += (x - s.average) * (x - s.average);
  s.stddev = std::sqrt(sq / static_cast<double>(xs.size()));
  s.max = xs.back();
  return s;
}

/// One row of the size-increase table: growth of variables and constraints
/// of a stage relative to the source models.
struct StageSummary {
  std::string stage;
  Summary variables;
  Summary constraints;
};

/// Rows for the decomposed and preprocessed stages. Instances where a ratio is
/// undefined are left out of that column.
inline std::vector<StageSummary> summarize(const std::vector<ModelStats>& models) {
  std::vector<double> tv, tc, pv, pc;
  for (const auto& m : models) {
    if (auto r = m.tcn_variable_ratio()) tv.push_back(*r);
    if (auto r = m.tcn_constraint_ratio()) tc.push_back(*r);
    if (auto r = m.preprocessed_variable_ratio()) pv.push_back(*r);
    if (auto r = m.preprocessed_constraint_ratio()) pc.push_back(*r);
  }
  return {{"TCN", summarize(tv), summarize(tc)}, {"Preprocessed", summarize(pv), summarize(pc)}};
}

}  // namespace tcn

#endif
