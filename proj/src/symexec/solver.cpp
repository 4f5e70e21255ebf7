#include "violet/symexec/solver.hpp"

#include <algorithm>
#include <limits>

#include "violet/error.hpp"

namespace violet::symexec {

namespace {

struct Search {
  const VariableTable& table;
  std::vector<VarId> order;                      // variables in id order
  std::vector<std::vector<const ExprNode*>> at;  // atoms checked after order[i] is bound
  std::vector<std::int64_t> values;
  const std::function<bool(const Assignment&)>& visit;
  bool stop = false;

  void run(std::size_t depth) {
    if (stop) return;
    if (depth == order.size()) {
      Assignment a;
      for (VarId v : order) a[v] = values[static_cast<std::size_t>(v)];
      if (!visit(a)) stop = true;
      return;
    }
    VarId v = order[depth];
    const auto& d = table.at(v).domain;
    for (std::int64_t i = 0; i < d.size() && !stop; ++i) {
      values[static_cast<std::size_t>(v)] = d.value_at(i);
      bool ok = true;
      for (const ExprNode* atom : at[depth])
        if (evaluate(*atom, values) == 0) {
          ok = false;
          break;
        }
      if (ok) run(depth + 1);
    }
  }
};

}  // namespace

void Solver::enumerate(const std::vector<ExprPtr>& atoms, const std::vector<VarId>& extra_vars,
                       const std::function<bool(const Assignment&)>& visit) const {
  std::set<VarId> vars(extra_vars.begin(), extra_vars.end());
  for (const auto& a : atoms) collect_vars(*a, vars);

  std::uint64_t product = 1;
  for (VarId v : vars) {
    const auto& d = table_.at(v).domain;
    if (!d.finite())
      throw SolverLimitExceeded("variable '" + table_.at(v).name + "' has no finite domain");
    auto size = static_cast<std::uint64_t>(d.size());
    if (size == 0) return;
    if (product > max_product_ / size)
      throw SolverLimitExceeded("query domain product exceeds " + std::to_string(max_product_));
    product *= size;
  }

  Search s{table_, {vars.begin(), vars.end()}, {}, std::vector<std::int64_t>(table_.size(), 0),
           visit};
  s.at.resize(s.order.size());
  for (const auto& a : atoms) {
    auto av = vars_of(*a);
    if (av.empty()) {
      if (evaluate(*a, s.values) == 0) return;
      continue;
    }
    auto pos = std::find(s.order.begin(), s.order.end(), *av.rbegin()) - s.order.begin();
    s.at[static_cast<std::size_t>(pos)].push_back(a.get());
  }
  s.run(0);
}

std::optional<Assignment> Solver::solve(const std::vector<ExprPtr>& atoms) const {
  std::optional<Assignment> found;
  enumerate(atoms, {}, [&](const Assignment& a) {
    found = a;
    return false;
  });
  return found;
}

std::vector<ExprPtr> Solver::connected(const std::vector<ExprPtr>& base,
                                       std::set<VarId> reach) const {
  std::vector<char> taken(base.size(), 0);
  std::vector<std::set<VarId>> base_vars;
  for (const auto& b : base) base_vars.push_back(vars_of(*b));
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (taken[i]) continue;
      bool touches = std::any_of(base_vars[i].begin(), base_vars[i].end(),
                                 [&](VarId v) { return reach.count(v) > 0; });
      if (!touches) continue;
      taken[i] = 1;
      reach.insert(base_vars[i].begin(), base_vars[i].end());
      grew = true;
    }
  }
  std::vector<ExprPtr> out;
  for (std::size_t i = 0; i < base.size(); ++i)
    if (taken[i]) out.push_back(base[i]);
  return out;
}

bool Solver::feasible_with(const std::vector<ExprPtr>& base,
                           const std::vector<ExprPtr>& extra) const {
  std::set<VarId> reach;
  for (const auto& e : extra) collect_vars(*e, reach);
  std::vector<ExprPtr> query = extra;
  for (auto& a : connected(base, reach)) query.push_back(std::move(a));
  return satisfiable(query);
}

bool Solver::implies(const std::vector<ExprPtr>& atoms, const ExprPtr& atom) const {
  std::vector<ExprPtr> query = atoms;
  query.push_back(unary(Op::Not, atom));
  return !satisfiable(query);
}

std::optional<std::int64_t> Solver::minimum(const std::vector<ExprPtr>& atoms,
                                            const ExprPtr& e) const {
  std::optional<std::int64_t> best;
  auto ev = vars_of(*e);
  std::vector<std::int64_t> values(table_.size(), 0);
  enumerate(connected(atoms, ev), {ev.begin(), ev.end()}, [&](const Assignment& a) {
    for (const auto& [v, x] : a) values[static_cast<std::size_t>(v)] = x;
    auto x = evaluate(*e, values);
    if (!best || x < *best) best = x;
    return true;
  });
  return best;
}

}  // namespace violet::symexec
