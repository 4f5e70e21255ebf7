#include "violet/checker/checker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "violet/confscript/parser.hpp"
#include "violet/confscript/printer.hpp"
#include "violet/error.hpp"
#include "violet/symexec/solver.hpp"

namespace violet::checker {

using impact::cost_ratio;
using impact::join_atoms;
using symexec::ExprPtr;
using symexec::VarKind;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Atom parsing and solving against one model's variables.
class Context {
 public:
  explicit Context(const ImpactModel& m) : model_(m), table_(m.table()), solver_(table_) {}

  std::vector<ExprPtr> parse(const std::vector<std::string>& atoms) const {
    std::vector<ExprPtr> out;
    for (const auto& a : atoms) out.push_back(symexec::parse_atom(a, table_));
    return out;
  }

  void fix(std::vector<ExprPtr>& atoms, const ConcreteConfig& cfg) const {
    std::set<symexec::VarId> used;
    for (const auto& a : atoms) symexec::collect_vars(*a, used);
    for (auto v : used) {
      auto it = cfg.values.find(table_.at(v).name);
      if (it == cfg.values.end()) continue;
      atoms.push_back(
          symexec::binary(symexec::Op::Eq, symexec::variable(v), symexec::constant(it->second)));
    }
  }

  bool matches(const CostTableRow& row, const ConcreteConfig& cfg) const {
    // A parameter held at one value during exploration says nothing about
    // any other value.
    for (const auto& v : model_.variables) {
      if (!v.fixed_value) continue;
      auto it = cfg.values.find(v.name);
      if (it != cfg.values.end() && it->second != *v.fixed_value) return false;
    }
    auto atoms = parse(row.config_constraint);
    fix(atoms, cfg);
    return solver_.satisfiable(atoms);
  }

  bool compatible(const std::vector<std::string>& a, const std::vector<std::string>& b) const {
    auto atoms = parse(a);
    for (auto& x : parse(b)) atoms.push_back(std::move(x));
    return solver_.satisfiable(atoms);
  }

  const symexec::VariableTable& table() const { return table_; }
  const symexec::Solver& solver() const { return solver_; }
  const ImpactModel& model() const { return model_; }

 private:
  const ImpactModel& model_;
  symexec::VariableTable table_;
  symexec::Solver solver_;
};

struct Candidate {
  const CostTableRow* slow;
  const CostTableRow* fast;
  trace::Metric metric;
  double ratio;
};

/// Latency evidence first, then the largest ratio, then the lowest ids.
bool better(const Candidate& a, const Candidate& b) {
  bool al = a.metric == trace::Metric::Latency, bl = b.metric == trace::Metric::Latency;
  if (al != bl) return al;
  if (a.ratio != b.ratio) return a.ratio > b.ratio;
  return std::make_tuple(a.slow->state_id, a.fast->state_id, static_cast<int>(a.metric)) <
         std::make_tuple(b.slow->state_id, b.fast->state_id, static_cast<int>(b.metric));
}

/// Metrics on which `slow` exceeds `fast` by more than the threshold.
void flag(const CostTableRow& slow, const CostTableRow& fast, double threshold_percent,
          std::optional<Candidate>& best) {
  for (auto m : trace::kAllMetrics) {
    if (slow.cost[m] <= fast.cost[m]) continue;
    double r = cost_ratio(slow.cost[m], fast.cost[m]);
    if (!(r > threshold_percent / 100.0)) continue;
    Candidate c{&slow, &fast, m, r};
    if (!best || better(c, *best)) best = c;
  }
}

std::map<std::string, std::string> render_case(const std::map<std::string, std::int64_t>& tc,
                                               const ImpactModel& model) {
  std::map<std::string, std::string> out;
  for (const auto& [name, v] : tc) out[name] = model.variable(name)->domain.format_value(v);
  return out;
}

Evidence make_evidence(const Candidate& c, const ImpactModel& diffs_from) {
  Evidence e;
  e.slow_row = c.slow->state_id;
  e.fast_row = c.fast->state_id;
  e.metric = c.metric;
  e.ratio = c.ratio;
  e.slow_constraint = join_atoms(c.slow->config_constraint);
  e.fast_constraint = join_atoms(c.fast->config_constraint);
  e.slow_value = c.slow->cost[c.metric];
  e.fast_value = c.fast->cost[c.metric];
  auto it = diffs_from.diffs.find({e.slow_row, e.fast_row});
  if (it != diffs_from.diffs.end()) e.critical_chain = it->second.critical_chain;
  return e;
}

std::string percent(double ratio) {
  if (std::isinf(ratio)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f%%", ratio * 100);
  return buf;
}

std::string describe(const Evidence& e, const char* slow_label, const char* fast_label) {
  return std::string(slow_label) + " row " + std::to_string(e.slow_row) + " [" +
         e.slow_constraint + "] " + trace::to_string(e.metric) + " " +
         std::to_string(e.slow_value) + " vs " + fast_label + " row " +
         std::to_string(e.fast_row) + " [" + e.fast_constraint + "] " +
         std::to_string(e.fast_value) + " (+" + percent(e.ratio) + ")";
}

}  // namespace

ConcreteConfig parse_config(const std::string& text, const ImpactModel& model) {
  ConcreteConfig cfg = default_config(model);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigFileError("line " + std::to_string(lineno) + ": expected `name = value`");
    auto name = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    const auto* v = model.variable(name);
    if (!v || v->kind == VarKind::Internal)
      throw ConfigFileError("line " + std::to_string(lineno) + ": unknown parameter '" + name + "'");
    auto parsed = v->domain.parse_value(value);
    if (!parsed)
      throw ConfigFileError("line " + std::to_string(lineno) + ": invalid value '" + value +
                            "' for " + name + " (domain " + v->domain.to_string() + ")");
    cfg.values[name] = *parsed;
  }
  return cfg;
}

ConcreteConfig default_config(const ImpactModel& model) {
  ConcreteConfig cfg;
  for (const auto& v : model.variables)
    if (v.kind == VarKind::Config && v.default_value) cfg.values[v.name] = *v.default_value;
  return cfg;
}

std::vector<const CostTableRow*> locate_rows(const ImpactModel& model,
                                             const ConcreteConfig& config) {
  Context ctx(model);
  std::vector<const CostTableRow*> out;
  for (const auto& r : model.rows)
    if (ctx.matches(r, config)) out.push_back(&r);
  return out;
}

std::map<std::string, std::int64_t> generate_test_case(const std::vector<std::string>& predicate,
                                                       const ImpactModel& model) {
  Context ctx(model);
  std::vector<symexec::VarId> inputs;
  for (std::size_t i = 0; i < ctx.table().size(); ++i)
    if (ctx.table().at(static_cast<symexec::VarId>(i)).kind == VarKind::Input)
      inputs.push_back(static_cast<symexec::VarId>(i));
  std::optional<symexec::Assignment> found;
  ctx.solver().enumerate(ctx.parse(predicate), inputs, [&](const symexec::Assignment& a) {
    found = a;
    return false;
  });
  if (!found) throw UnsatPredicate("no input satisfies `" + join_atoms(predicate) + "`");
  std::map<std::string, std::int64_t> out;
  for (auto v : inputs) out[ctx.table().at(v).name] = found->at(v);
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Ok: return "ok";
    case Verdict::Specious: return "specious";
    case Verdict::OutsideExploredSpace: return "outside-explored-space";
  }
  return "?";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Ok: return 0;
    case Verdict::Specious: return 2;
    case Verdict::OutsideExploredSpace: return 3;
  }
  return 1;
}

namespace {

std::string config_text(const ConcreteConfig& c, const ImpactModel& m) {
  std::string out;
  for (const auto& v : m.variables) {
    auto it = c.values.find(v.name);
    if (it == c.values.end() || v.kind != VarKind::Config) continue;
    if (!out.empty()) out += ", ";
    out += v.name + "=" + v.domain.format_value(it->second);
  }
  return out;
}

void finish(CheckReport& r, const std::optional<Candidate>& best, const ImpactModel& model,
            const Context& ctx, const char* slow_label, const char* fast_label) {
  if (!best) {
    r.verdict = Verdict::Ok;
    return;
  }
  r.verdict = Verdict::Specious;
  r.evidence = make_evidence(*best, model);
  auto pred = best->slow->input_predicate;
  for (const auto& a : best->fast->input_predicate) pred.push_back(a);
  (void)ctx;
  r.test_case = render_case(generate_test_case(pred, model), model);
  r.summary += "; " + describe(*r.evidence, slow_label, fast_label);
}

}  // namespace

CheckReport check_update(const ImpactModel& model, const ConcreteConfig& old_cfg,
                         const ConcreteConfig& new_cfg, double threshold_percent) {
  Context ctx(model);
  CheckReport r;
  r.mode = 1;
  r.summary = "update {" + config_text(old_cfg, model) + "} -> {" + config_text(new_cfg, model) + "}";
  auto old_rows = locate_rows(model, old_cfg);
  auto new_rows = locate_rows(model, new_cfg);
  if (old_rows.empty() || new_rows.empty()) {
    r.verdict = Verdict::OutsideExploredSpace;
    r.summary += std::string("; no model row matches the ") + (old_rows.empty() ? "old" : "new") +
                 " configuration";
    return r;
  }
  std::optional<Candidate> best;
  for (const auto* n : new_rows)
    for (const auto* o : old_rows)
      if (ctx.compatible(n->input_predicate, o->input_predicate))
        flag(*n, *o, threshold_percent, best);
  finish(r, best, model, ctx, "new", "old");
  return r;
}

CheckReport check_default(const ImpactModel& model, const ConcreteConfig& defaults,
                          double threshold_percent) {
  Context ctx(model);
  CheckReport r;
  r.mode = 2;
  r.summary = "defaults {" + config_text(defaults, model) + "}";
  if (!model.target.empty() && !model.variable(model.target)) {
    r.verdict = Verdict::OutsideExploredSpace;
    r.summary += "; parameter '" + model.target + "' is not in the model";
    return r;
  }
  std::vector<const CostTableRow*> in, out;
  for (const auto& row : model.rows) (ctx.matches(row, defaults) ? in : out).push_back(&row);
  if (in.empty()) {
    r.verdict = Verdict::OutsideExploredSpace;
    r.summary += "; no model row matches the defaults";
    return r;
  }
  std::optional<Candidate> best;
  for (const auto* d : in)
    for (const auto* o : out)
      if (ctx.compatible(d->input_predicate, o->input_predicate))
        flag(*d, *o, threshold_percent, best);
  finish(r, best, model, ctx, "default", "alternative");
  return r;
}

CheckReport check_code_upgrade(const ImpactModel& old_model, const ImpactModel& new_model,
                               const std::optional<ConcreteConfig>& config,
                               double threshold_percent) {
  Context old_ctx(old_model), new_ctx(new_model);
  CheckReport r;
  r.mode = 3;
  r.summary = "code change " + old_model.software + " -> " + new_model.software;
  auto key = [](const CostTableRow& row) {
    return join_atoms(row.config_constraint) + " | " + join_atoms(row.input_predicate) + " | " +
           join_atoms(row.internal);
  };
  std::map<std::string, const CostTableRow*> old_by_key;
  for (const auto& row : old_model.rows)
    if (!config || old_ctx.matches(row, *config)) old_by_key.emplace(key(row), &row);
  std::set<std::string> seen;
  std::optional<Candidate> best;
  bool any = false;
  for (const auto& row : new_model.rows) {
    if (config && !new_ctx.matches(row, *config)) continue;
    any = true;
    auto k = key(row);
    seen.insert(k);
    auto it = old_by_key.find(k);
    if (it == old_by_key.end()) {
      r.notes.push_back("row " + std::to_string(row.state_id) + " [" + k + "] is new");
      continue;
    }
    flag(row, *it->second, threshold_percent, best);
  }
  for (const auto& [k, row] : old_by_key)
    if (!seen.count(k))
      r.notes.push_back("old row " + std::to_string(row->state_id) + " [" + k + "] disappeared");
  if (!any && config) {
    r.verdict = Verdict::OutsideExploredSpace;
    r.summary += "; no row of the new model matches the configuration";
    return r;
  }
  if (best) {
    r.verdict = Verdict::Specious;
    r.evidence = make_evidence(*best, new_model);
    r.evidence->critical_chain.clear();
    r.test_case = render_case(generate_test_case(best->slow->input_predicate, new_model), new_model);
    r.summary += "; " + describe(*r.evidence, "new", "old");
  }
  return r;
}

CheckReport check_workload_shift(const ImpactModel& model, const ConcreteConfig& config,
                                 const std::vector<std::string>& old_predicate,
                                 const std::vector<std::string>& new_predicate,
                                 double threshold_percent) {
  Context ctx(model);
  CheckReport r;
  r.mode = 3;
  r.summary = "workload " + join_atoms(old_predicate) + " -> " + join_atoms(new_predicate) +
              " under {" + config_text(config, model) + "}";
  auto rows = locate_rows(model, config);
  std::vector<const CostTableRow*> old_rows, new_rows;
  for (const auto* row : rows) {
    if (ctx.compatible(row->input_predicate, old_predicate)) old_rows.push_back(row);
    if (ctx.compatible(row->input_predicate, new_predicate)) new_rows.push_back(row);
  }
  if (old_rows.empty() || new_rows.empty()) {
    r.verdict = Verdict::OutsideExploredSpace;
    r.summary += std::string("; no model row covers the ") + (old_rows.empty() ? "old" : "new") +
                 " workload";
    return r;
  }
  std::optional<Candidate> best;
  for (const auto* n : new_rows)
    for (const auto* o : old_rows) flag(*n, *o, threshold_percent, best);
  if (best) {
    r.verdict = Verdict::Specious;
    r.evidence = make_evidence(*best, model);
    auto pred = best->slow->input_predicate;
    pred.insert(pred.end(), new_predicate.begin(), new_predicate.end());
    r.test_case = render_case(generate_test_case(pred, model), model);
    r.summary += "; " + describe(*r.evidence, "new-workload", "old-workload");
  }
  return r;
}

std::vector<std::string> split_predicate(const std::string& text) {
  std::vector<std::string> out;
  if (trim(text).empty() || trim(text) == "true") return out;
  auto split = [&](auto&& self, const confscript::Expr& e) -> void {
    if (e.kind == confscript::Expr::Kind::Binary && e.binary == confscript::BinaryOp::And) {
      self(self, e.operands[0]);
      self(self, e.operands[1]);
    } else {
      out.push_back(confscript::print_expr(e, confscript::ExprStyle::Compact));
    }
  };
  split(split, confscript::parse_expression(text));
  return out;
}

std::string render_text(const CheckReport& r) {
  static const char* names[] = {"", "configuration update", "default value", "evolution"};
  std::ostringstream os;
  os << "mode " << r.mode << " (" << names[r.mode] << "): " << to_string(r.verdict) << "\n";
  os << "  " << r.summary << "\n";
  if (r.evidence && !r.evidence->critical_chain.empty()) {
    os << "  critical path: ";
    for (std::size_t i = 0; i < r.evidence->critical_chain.size(); ++i)
      os << (i ? "->" : "") << r.evidence->critical_chain[i];
    os << "\n";
  }
  if (r.test_case) {
    os << "  test case:";
    for (const auto& [k, v] : *r.test_case) os << " " << k << "=" << v;
    if (r.test_case->empty()) os << " (any input)";
    os << "\n";
  }
  for (const auto& n : r.notes) os << "  note: " << n << "\n";
  return os.str();
}

std::string render_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["format"] = "violet-check v1";
  j["mode"] = r.mode;
  j["verdict"] = to_string(r.verdict);
  j["summary"] = r.summary;
  if (r.evidence) {
    const auto& e = *r.evidence;
    nlohmann::ordered_json je;
    je["slow_row"] = e.slow_row;
    je["fast_row"] = e.fast_row;
    je["metric"] = trace::to_string(e.metric);
    je["ratio"] = std::isinf(e.ratio) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(e.ratio);
    je["slow_constraint"] = e.slow_constraint;
    je["fast_constraint"] = e.fast_constraint;
    je["slow_value"] = e.slow_value;
    je["fast_value"] = e.fast_value;
    je["critical_chain"] = e.critical_chain;
    j["evidence"] = std::move(je);
  } else {
    j["evidence"] = nullptr;
  }
  if (r.test_case) {
    nlohmann::ordered_json tc = nlohmann::ordered_json::object();
    for (const auto& [k, v] : *r.test_case) tc[k] = v;
    j["test_case"] = std::move(tc);
  } else {
    j["test_case"] = nullptr;
  }
  j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

}  // namespace violet::checker
