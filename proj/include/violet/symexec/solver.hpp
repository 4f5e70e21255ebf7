#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "violet/symexec/expr.hpp"

namespace violet::symexec {

/// Assignment to the variables a query involved, keyed by VarId.
using Assignment = std::map<VarId, std::int64_t>;

/// Finite-domain satisfiability by enumeration.
///
/// Variables are assigned in id order, values in domain order, and each atom
/// is checked as soon as its last variable is bound. The first solution found
/// is therefore the smallest in lexicographic domain order. A query whose
/// domain product exceeds `max_product` throws SolverLimitExceeded.
class Solver {
 public:
  static constexpr std::uint64_t kDefaultMaxProduct = 1'000'000;

  explicit Solver(const VariableTable& table, std::uint64_t max_product = kDefaultMaxProduct)
      : table_(table), max_product_(max_product) {}

  std::optional<Assignment> solve(const std::vector<ExprPtr>& atoms) const;
  bool satisfiable(const std::vector<ExprPtr>& atoms) const { return solve(atoms).has_value(); }

  /// Feasibility of `base ∧ extra` where `base` is known satisfiable: only
  /// atoms sharing variables (transitively) with `extra` are enumerated.
  bool feasible_with(const std::vector<ExprPtr>& base, const std::vector<ExprPtr>& extra) const;

  /// True when every solution of `atoms` satisfies `atom`.
  bool implies(const std::vector<ExprPtr>& atoms, const ExprPtr& atom) const;

  /// Visits every solution over vars(atoms) ∪ `extra_vars` in lexicographic
  /// order. Stops early when `visit` returns false.
  void enumerate(const std::vector<ExprPtr>& atoms, const std::vector<VarId>& extra_vars,
                 const std::function<bool(const Assignment&)>& visit) const;

  /// Smallest value `e` takes over the solutions of `atoms`.
  std::optional<std::int64_t> minimum(const std::vector<ExprPtr>& atoms, const ExprPtr& e) const;

 private:
  const VariableTable& table_;
  std::uint64_t max_product_;

  /// Atoms of `base` sharing variables, transitively, with `reach`.
  std::vector<ExprPtr> connected(const std::vector<ExprPtr>& base, std::set<VarId> reach) const;
};

}  // namespace violet::symexec
