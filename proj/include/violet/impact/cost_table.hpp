#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "violet/symexec/expr.hpp"
#include "violet/symexec/state.hpp"
#include "violet/trace/records.hpp"
#include "violet/trace/state_trace.hpp"

namespace violet::impact {

using symexec::ExprPtr;
using symexec::VariableTable;

/// A state's decision atoms split by the kind of variable they mention.
struct SplitConstraint {
  std::vector<ExprPtr> config;    // config-only atoms plus mixed ones
  std::vector<ExprPtr> input;     // input-only atoms
  std::vector<ExprPtr> internal;  // atoms over fresh extern returns
  /// Atoms mentioning both config and input (or internal with either).
  std::vector<ExprPtr> mixed;
};

/// Separates the input predicate from the configuration constraint. Domain
/// seeds are ignored; atoms over internal variables are kept apart.
SplitConstraint extract_input_predicate(const symexec::PathConstraint& constraint,
                                        const VariableTable& table);

/// Drops atoms implied by the remaining ones (earliest first), then renders
/// them sorted by (lowest variable id, text) without duplicates.
std::vector<std::string> canonical_atoms(const std::vector<ExprPtr>& atoms,
                                         const VariableTable& table);

/// `a && b`, or `true` for an empty list. Disjunctive atoms get parentheses.
std::string join_atoms(const std::vector<std::string>& atoms);

struct CostTableRow {
  int state_id = 0;
  std::string status;
  std::vector<std::string> config_constraint;
  std::vector<std::string> input_predicate;
  std::vector<std::string> internal;
  bool mixed = false;
  trace::CostVector cost;
  /// Trace file of the state, relative to the run directory.
  std::string trace;
  friend bool operator==(const CostTableRow&, const CostTableRow&) = default;
};

/// One row per state, in state order.
std::vector<CostTableRow> build_cost_table(const std::vector<trace::StateTrace>& traces,
                                           const VariableTable& table);

/// Relative trace path used for a state.
std::string trace_file_name(int state_id);

/// Atoms present (textually) in both rows' configuration constraints that
/// mention a parameter from `related`.
int similarity(const CostTableRow& a, const CostTableRow& b, const std::set<std::string>& related);

struct SuspiciousPair {
  int slow = 0;
  int fast = 0;
  trace::Metric metric = trace::Metric::Latency;
  /// (slow - fast) / fast; infinity when fast is 0.
  double ratio = 0;
  int similarity = 0;
  friend bool operator==(const SuspiciousPair&, const SuspiciousPair&) = default;
};

/// (slow - fast) / fast for one metric, +inf when fast is 0 and slow is not.
double cost_ratio(std::int64_t slow, std::int64_t fast);

/// Every row pair and metric whose ratio exceeds `threshold_percent` / 100.
/// Ordered by descending similarity, then ascending (lower id, higher id),
/// then metric order.
std::vector<SuspiciousPair> find_suspicious_pairs(const std::vector<CostTableRow>& rows,
                                                  double threshold_percent,
                                                  const std::set<std::string>& related);

}  // namespace violet::impact
