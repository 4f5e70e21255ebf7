#include "violet/analysis/related.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "violet/error.hpp"

namespace violet::analysis {

using confscript::Expr;
using confscript::FunctionDef;
using confscript::Program;
using confscript::Stmt;

namespace {
bool is_builtin(const std::string& name) { return name == "trace_on" || name == "trace_off"; }

std::set<std::string> configs_in(const Program& prog, const Expr& e) {
  std::set<std::string> out;
  confscript::for_each_name(e, [&](const Expr& n) {
    if (prog.find_config(n.name)) out.insert(n.name);
  });
  return out;
}
}  // namespace

// ---------------------------------------------------------------------------
// CallGraph

CallGraph::CallGraph(const Program& program) : entry_(program.entry) {
  for (const auto& f : program.functions) {
    nodes_.push_back(f.name);
    confscript::for_each_stmt(f.body, [&](const Stmt& s) {
      if (s.kind == Stmt::Kind::Call && !is_builtin(s.target)) {
        edges_.push_back({f.name, s.target, s.id});
      } else if ((s.kind == Stmt::Kind::Let || s.kind == Stmt::Kind::Assign) && s.callee) {
        edges_.push_back({f.name, *s.callee, s.id});
      }
    });
  }
}

std::vector<CallEdge> CallGraph::calls_from(const std::string& caller) const {
  std::vector<CallEdge> out;
  for (const auto& e : edges_)
    if (e.caller == caller) out.push_back(e);
  return out;
}

std::vector<std::vector<CallEdge>> CallGraph::paths_to(const std::string& target,
                                                       std::size_t max_depth) const {
  std::vector<std::vector<CallEdge>> out;
  std::vector<CallEdge> path;
  std::set<std::string> on_path{entry_};
  std::function<void(const std::string&)> dfs = [&](const std::string& fn) {
    if (fn == target) {
      out.push_back(path);
      return;
    }
    if (path.size() >= max_depth) return;
    for (const auto& e : edges_) {
      if (e.caller != fn || on_path.count(e.callee)) continue;
      path.push_back(e);
      on_path.insert(e.callee);
      dfs(e.callee);
      on_path.erase(e.callee);
      path.pop_back();
    }
  };
  dfs(entry_);
  return out;
}

// ---------------------------------------------------------------------------
// RelatedSet

std::set<std::string> RelatedSet::related() const {
  std::set<std::string> out = enablers;
  out.insert(influenced.begin(), influenced.end());
  return out;
}

// ---------------------------------------------------------------------------
// ConfigAnalysis

ConfigAnalysis::ConfigAnalysis(const Program& program) : prog_(program), cg_(program) {
  for (const auto& f : program.functions)
    deps_.emplace(f.name, std::make_unique<ControlDependence>(f));
  collect_usages();
}

const ControlDependence& ConfigAnalysis::dependence(const std::string& func) const {
  auto it = deps_.find(func);
  if (it == deps_.end()) throw UnknownName("unknown function '" + func + "'");
  return *it->second;
}

void ConfigAnalysis::collect_usages() {
  // Configs a user function hands back through `return` (getter pattern).
  std::map<std::string, std::set<std::string>> getter_returns;
  for (const auto& f : prog_.functions) {
    confscript::for_each_stmt(f.body, [&](const Stmt& s) {
      if (s.kind == Stmt::Kind::Return && s.expr) {
        auto cs = configs_in(prog_, *s.expr);
        getter_returns[f.name].insert(cs.begin(), cs.end());
      }
    });
  }

  for (const auto& f : prog_.functions) {
    auto& out = usages_by_func_[f.name];
    std::map<std::string, std::set<std::string>> carried;  // local -> configs

    confscript::for_each_stmt(f.body, [&](const Stmt& s) {
      if ((s.kind == Stmt::Kind::Let || s.kind == Stmt::Kind::Assign)) {
        std::set<std::string> src;
        if (s.expr) {
          src = configs_in(prog_, *s.expr);
        } else if (s.callee) {
          const FunctionDef* callee = prog_.find_function(*s.callee);
          if (callee && callee->is_extern && callee->is_pure) {
            for (const auto& a : s.args) {
              auto cs = configs_in(prog_, a);
              src.insert(cs.begin(), cs.end());
            }
          } else if (callee && !callee->is_extern) {
            src = getter_returns[callee->name];
          }
        }
        carried[s.target].insert(src.begin(), src.end());
      }
    });

    confscript::for_each_stmt(f.body, [&](const Stmt& s) {
      std::set<std::string> direct;
      std::set<std::string> via;
      for (const Expr* e : confscript::statement_exprs(s)) {
        confscript::for_each_name(*e, [&](const Expr& n) {
          if (prog_.find_config(n.name)) {
            direct.insert(n.name);
          } else if (s.is_branch()) {
            if (auto it = carried.find(n.name); it != carried.end())
              via.insert(it->second.begin(), it->second.end());
          }
        });
      }
      for (const auto& c : direct) out.push_back({c, f.name, s.id, false});
      for (const auto& c : via)
        if (!direct.count(c)) out.push_back({c, f.name, s.id, true});
    });
  }
}

std::vector<UsagePoint> ConfigAnalysis::usages_in(const std::string& func) const {
  auto it = usages_by_func_.find(func);
  return it == usages_by_func_.end() ? std::vector<UsagePoint>{} : it->second;
}

std::vector<UsagePoint> ConfigAnalysis::usages(const std::string& p) const {
  std::vector<UsagePoint> out;
  for (const auto& f : prog_.functions)
    for (const auto& u : usages_by_func_.at(f.name))
      if (u.param == p) out.push_back(u);
  return out;
}

std::set<std::string> ConfigAnalysis::enablers(const std::string& p) const {
  if (!prog_.find_config(p)) throw UnknownConfig("unknown config '" + p + "'");
  std::set<std::string> es;

  auto check_function = [&](const std::string& func, int p_site, const UsagePoint& p_usage) {
    const auto& dep = dependence(func);
    for (const auto& q_usage : usages_in(func)) {
      if (q_usage == p_usage || q_usage.param == p) continue;
      if (dep.depends(p_site, q_usage.instruction)) es.insert(q_usage.param);
    }
  };

  for (const auto& p_usage : usages(p)) {
    // Callers on every chain from the entry; the site is the call leading on.
    for (const auto& chain : cg_.paths_to(p_usage.func))
      for (const auto& edge : chain) check_function(edge.caller, edge.callsite, p_usage);
    // Within the usage function itself, the site is the usage instruction.
    check_function(p_usage.func, p_usage.instruction, p_usage);
  }
  return es;
}

std::map<std::string, RelatedSet> ConfigAnalysis::related() const {
  std::map<std::string, RelatedSet> m;
  for (const auto& c : prog_.configs) m[c.name].target = c.name;
  for (const auto& c : prog_.configs) {
    auto es = enablers(c.name);
    m[c.name].enablers = es;
    for (const auto& q : es) m[q].influenced.insert(c.name);
  }
  return m;
}

std::set<std::string> get_enabler_configs(const Program& program, const std::string& p) {
  return ConfigAnalysis(program).enablers(p);
}

std::map<std::string, RelatedSet> get_related_configs(const Program& program) {
  return ConfigAnalysis(program).related();
}

// ---------------------------------------------------------------------------
// Report format

namespace {
std::string join(const std::set<std::string>& s) {
  std::string out;
  for (const auto& x : s) {
    if (!out.empty()) out += ',';
    out += x;
  }
  return out;
}

std::set<std::string> split_list(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(item);
  return out;
}
}  // namespace

std::string format_related_report(const Program& program,
                                  const std::map<std::string, RelatedSet>& related) {
  std::string out;
  for (const auto& c : program.configs) {
    auto it = related.find(c.name);
    RelatedSet r = it == related.end() ? RelatedSet{c.name, {}, {}} : it->second;
    out += c.name + "\tenabler:" + join(r.enablers) + "\tinfluenced:" + join(r.influenced) + "\n";
  }
  return out;
}

std::map<std::string, RelatedSet> parse_related_report(const std::string& text) {
  std::map<std::string, RelatedSet> out;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, '\t')) fields.push_back(f);
    if (fields.size() != 3 || fields[1].rfind("enabler:", 0) != 0 ||
        fields[2].rfind("influenced:", 0) != 0)
      throw Error("related-configs line " + std::to_string(lineno) +
                  ": expected `target<TAB>enabler:..<TAB>influenced:..`");
    RelatedSet r;
    r.target = fields[0];
    r.enablers = split_list(fields[1].substr(8));
    r.influenced = split_list(fields[2].substr(11));
    out[r.target] = std::move(r);
  }
  return out;
}

}  // namespace violet::analysis
