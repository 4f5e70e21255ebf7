#include "violet/impact/cost_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <tuple>

#include "violet/confscript/parser.hpp"
#include "violet/symexec/solver.hpp"

namespace violet::impact {

using symexec::VarKind;

SplitConstraint extract_input_predicate(const symexec::PathConstraint& constraint,
                                        const VariableTable& table) {
  SplitConstraint out;
  for (const auto& atom : constraint.atoms) {
    if (atom.origin == symexec::AtomOrigin::Domain) continue;
    bool cfg = false, in = false, internal = false;
    for (auto v : symexec::vars_of(*atom.expr)) {
      switch (table.at(v).kind) {
        case VarKind::Config: cfg = true; break;
        case VarKind::Input: in = true; break;
        case VarKind::Internal: internal = true; break;
      }
    }
    if (internal) {
      out.internal.push_back(atom.expr);
      if (cfg || in) out.mixed.push_back(atom.expr);
    } else if (cfg) {
      out.config.push_back(atom.expr);
      if (in) out.mixed.push_back(atom.expr);
    } else if (in) {
      out.input.push_back(atom.expr);
    }
  }
  return out;
}

std::vector<std::string> canonical_atoms(const std::vector<ExprPtr>& atoms,
                                         const VariableTable& table) {
  symexec::Solver solver(table);
  std::vector<ExprPtr> kept = atoms;
  for (std::size_t i = 0; i < kept.size();) {
    std::vector<ExprPtr> rest;
    for (std::size_t j = 0; j < kept.size(); ++j)
      if (j != i) rest.push_back(kept[j]);
    if (solver.implies(rest, kept[i]))
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  std::vector<std::pair<int, std::string>> keyed;
  for (const auto& a : kept) {
    auto vars = symexec::vars_of(*a);
    int primary = vars.empty() ? -1 : *vars.begin();
    keyed.emplace_back(primary, symexec::to_text(*a, table));
  }
  std::sort(keyed.begin(), keyed.end());
  keyed.erase(std::unique(keyed.begin(), keyed.end()), keyed.end());
  std::vector<std::string> out;
  for (auto& [p, text] : keyed) out.push_back(std::move(text));
  return out;
}

std::string join_atoms(const std::vector<std::string>& atoms) {
  if (atoms.empty()) return "true";
  std::string out;
  for (const auto& a : atoms) {
    if (!out.empty()) out += " && ";
    // A disjunction binds looser than the joining &&.
    bool wrap = atoms.size() > 1 && a.find("||") != std::string::npos;
    out += wrap ? "(" + a + ")" : a;
  }
  return out;
}

std::string trace_file_name(int state_id) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "traces/state-%04d.trace", state_id);
  return buf;
}

std::vector<CostTableRow> build_cost_table(const std::vector<trace::StateTrace>& traces,
                                           const VariableTable& table) {
  std::vector<CostTableRow> rows;
  for (const auto& t : traces) {
    auto split = extract_input_predicate(t.constraint, table);
    CostTableRow r;
    r.state_id = t.state_id;
    r.status = symexec::to_string(t.status);
    r.config_constraint = canonical_atoms(split.config, table);
    r.input_predicate = canonical_atoms(split.input, table);
    r.internal = canonical_atoms(split.internal, table);
    r.mixed = !split.mixed.empty();
    r.cost = t.cost;
    r.trace = trace_file_name(t.state_id);
    rows.push_back(std::move(r));
  }
  return rows;
}

int similarity(const CostTableRow& a, const CostTableRow& b, const std::set<std::string>& related) {
  std::set<std::string> in_b(b.config_constraint.begin(), b.config_constraint.end());
  std::set<std::string> seen;
  int count = 0;
  for (const auto& atom : a.config_constraint) {
    if (!in_b.count(atom) || !seen.insert(atom).second) continue;
    bool hit = false;
    confscript::for_each_name(confscript::parse_expression(atom), [&](const confscript::Expr& n) {
      hit = hit || related.count(n.name) > 0;
    });
    if (hit) ++count;
  }
  return count;
}

double cost_ratio(std::int64_t slow, std::int64_t fast) {
  if (fast == 0) return slow > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  return static_cast<double>(slow - fast) / static_cast<double>(fast);
}

std::vector<SuspiciousPair> find_suspicious_pairs(const std::vector<CostTableRow>& rows,
                                                  double threshold_percent,
                                                  const std::set<std::string>& related) {
  const double threshold = threshold_percent / 100.0;
  struct Keyed {
    SuspiciousPair p;
    int lo, hi;
  };
  std::vector<Keyed> found;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const auto& a = rows[i];
      const auto& b = rows[j];
      int sim = -1;
      for (auto m : trace::kAllMetrics) {
        auto ca = a.cost[m], cb = b.cost[m];
        if (ca == cb) continue;
        const auto& slow = ca > cb ? a : b;
        const auto& fast = ca > cb ? b : a;
        double ratio = cost_ratio(slow.cost[m], fast.cost[m]);
        if (!(ratio > threshold)) continue;
        if (sim < 0) sim = similarity(a, b, related);
        found.push_back({{slow.state_id, fast.state_id, m, ratio, sim},
                         std::min(a.state_id, b.state_id),
                         std::max(a.state_id, b.state_id)});
      }
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const Keyed& x, const Keyed& y) {
    return std::make_tuple(-x.p.similarity, x.lo, x.hi, static_cast<int>(x.p.metric)) <
           std::make_tuple(-y.p.similarity, y.lo, y.hi, static_cast<int>(y.p.metric));
  });
  std::vector<SuspiciousPair> out;
  for (auto& k : found) out.push_back(k.p);
  return out;
}

}  // namespace violet::impact
