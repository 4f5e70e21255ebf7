#include "violet/impact/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "violet/error.hpp"

namespace violet::impact {

using json = nlohmann::ordered_json;
using confscript::Domain;
using symexec::VarKind;

const CostTableRow* ImpactModel::row(int state_id) const {
  for (const auto& r : rows)
    if (r.state_id == state_id) return &r;
  return nullptr;
}

const ModelVariable* ImpactModel::variable(const std::string& name) const {
  for (const auto& v : variables)
    if (v.name == name) return &v;
  return nullptr;
}

symexec::VariableTable ImpactModel::table() const {
  symexec::VariableTable t;
  for (const auto& v : variables) t.add(v.name, v.kind, v.domain);
  return t;
}

ImpactModel build_model(const confscript::Program& program,
                        const symexec::ExplorationResult& exploration,
                        const std::vector<trace::StateTrace>& traces, const ModelInputs& in) {
  ImpactModel m;
  m.software = in.software;
  m.target = in.target;
  m.related.assign(in.related.begin(), in.related.end());
  m.threshold_percent = in.threshold_percent;
  m.exhausted = exploration.exhausted;

  const auto& table = exploration.variables;
  // Globals left concrete never change, so any state shows their value.
  auto fixed = [&](const std::string& name) -> std::optional<std::int64_t> {
    if (table.find(name) || exploration.states.empty()) return std::nullopt;
    const auto& g = exploration.states.front().globals;
    auto it = g.find(name);
    if (it == g.end() || !symexec::is_concrete(it->second)) return std::nullopt;
    return it->second->value;
  };
  for (const auto& c : program.configs)
    m.variables.push_back({c.name, VarKind::Config, c.domain, c.default_value,
                           table.find(c.name).has_value(), fixed(c.name)});
  for (const auto& i : program.inputs)
    m.variables.push_back({i.name, VarKind::Input, i.domain, std::nullopt,
                           table.find(i.name).has_value(), fixed(i.name)});
  for (const auto& v : table.variables())
    if (v.kind == VarKind::Internal)
      m.variables.push_back({v.name, v.kind, v.domain, std::nullopt, true, std::nullopt});

  m.rows = build_cost_table(traces, table);

  std::set<std::string> related = in.related;
  if (!in.target.empty()) related.insert(in.target);
  m.pairs = find_suspicious_pairs(m.rows, in.threshold_percent, related);

  std::map<int, const trace::StateTrace*> by_id;
  for (const auto& t : traces) by_id[t.state_id] = &t;
  for (const auto& p : m.pairs) {
    auto key = std::make_pair(p.slow, p.fast);
    if (m.diffs.count(key)) continue;
    const auto* s = by_id.at(p.slow);
    const auto* f = by_id.at(p.fast);
    if (s->calls.empty() || f->calls.empty()) continue;
    m.diffs.emplace(key, differential_critical_path(*s, *f));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json domain_json(const Domain& d) {
  json j;
  switch (d.kind) {
    case Domain::Kind::Bool: j["type"] = "bool"; break;
    case Domain::Kind::Int:
      j["type"] = "int";
      j["lo"] = d.lo;
      j["hi"] = d.hi;
      break;
    case Domain::Kind::Enum:
      j["type"] = "enum";
      j["members"] = d.members;
      break;
    case Domain::Kind::Unbounded: j["type"] = "unbounded"; break;
  }
  return j;
}

json cost_json(const trace::CostVector& c) {
  json j = json::object();
  for (auto m : trace::kAllMetrics) j[trace::to_string(m)] = c[m];
  return j;
}

json entry_json(const DiffEntry& e) {
  json j;
  j["function"] = e.function;
  j["slow_cid"] = e.slow_cid;
  j["fast_cid"] = e.fast_cid ? json(*e.fast_cid) : json(nullptr);
  j["diff"] = cost_json(e.diff);
  return j;
}

[[noreturn]] void bad(const std::string& what) { throw ModelFormatError("model: " + what); }

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) bad(std::string("missing field '") + name + "'");
  return j.at(name);
}

template <typename T>
T get(const json& j, const char* name) {
  try {
    return field(j, name).get<T>();
  } catch (const json::exception&) {
    bad(std::string("field '") + name + "' has the wrong type");
  }
}

Domain domain_from(const json& j) {
  auto type = get<std::string>(j, "type");
  if (type == "bool") return Domain::boolean();
  if (type == "int") return Domain::integer(get<std::int64_t>(j, "lo"), get<std::int64_t>(j, "hi"));
  if (type == "enum") return Domain::enumeration(get<std::vector<std::string>>(j, "members"));
  if (type == "unbounded") return Domain::unbounded();
  bad("unknown domain type '" + type + "'");
}

trace::CostVector cost_from(const json& j) {
  trace::CostVector c;
  for (auto m : trace::kAllMetrics) c[m] = get<std::int64_t>(j, trace::to_string(m));
  return c;
}

VarKind kind_from(const std::string& s) {
  if (s == "config") return VarKind::Config;
  if (s == "input") return VarKind::Input;
  if (s == "internal") return VarKind::Internal;
  bad("unknown variable kind '" + s + "'");
}

trace::Metric metric_from(const std::string& s) {
  auto m = trace::parse_metric(s);
  if (!m) bad("unknown metric '" + s + "'");
  return *m;
}

DiffEntry entry_from(const json& j) {
  DiffEntry e;
  e.function = get<std::string>(j, "function");
  e.slow_cid = get<int>(j, "slow_cid");
  if (!field(j, "fast_cid").is_null()) e.fast_cid = get<int>(j, "fast_cid");
  e.diff = cost_from(field(j, "diff"));
  return e;
}

}  // namespace

std::string serialize_model(const ImpactModel& m) {
  json j;
  j["format"] = kModelFormat;
  j["software"] = m.software;
  j["target"] = m.target;
  j["related"] = m.related;
  j["threshold_percent"] = m.threshold_percent;
  j["exhausted"] = m.exhausted;

  json vars = json::array();
  for (const auto& v : m.variables) {
    json jv;
    jv["name"] = v.name;
    jv["kind"] = symexec::to_string(v.kind);
    jv["domain"] = domain_json(v.domain);
    jv["default"] = v.default_value ? json(v.domain.format_value(*v.default_value)) : json(nullptr);
    jv["symbolic"] = v.symbolic;
    jv["fixed"] = v.fixed_value ? json(v.domain.format_value(*v.fixed_value)) : json(nullptr);
    vars.push_back(std::move(jv));
  }
  j["variables"] = std::move(vars);

  json rows = json::array();
  for (const auto& r : m.rows) {
    json jr;
    jr["state"] = r.state_id;
    jr["status"] = r.status;
    jr["constraint"] = r.config_constraint;
    jr["input_predicate"] = r.input_predicate;
    jr["internal"] = r.internal;
    jr["mixed"] = r.mixed;
    jr["cost"] = cost_json(r.cost);
    jr["trace"] = r.trace;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);

  json pairs = json::array();
  for (const auto& p : m.pairs) {
    json jp;
    jp["slow"] = p.slow;
    jp["fast"] = p.fast;
    jp["metric"] = trace::to_string(p.metric);
    jp["ratio"] = std::isinf(p.ratio) ? json("inf") : json(p.ratio);
    jp["similarity"] = p.similarity;
    pairs.push_back(std::move(jp));
  }
  j["pairs"] = std::move(pairs);

  json diffs = json::array();
  for (const auto& [key, d] : m.diffs) {
    json jd;
    jd["slow"] = d.slow_state;
    jd["fast"] = d.fast_state;
    jd["lcs_length"] = d.lcs_length;
    jd["critical_cid"] = d.critical_cid ? json(*d.critical_cid) : json(nullptr);
    jd["critical_latency"] = d.critical_latency;
    jd["critical_chain"] = d.critical_chain;
    json common = json::array(), only = json::array();
    for (const auto& e : d.common) common.push_back(entry_json(e));
    for (const auto& e : d.slow_only) only.push_back(entry_json(e));
    jd["common"] = std::move(common);
    jd["slow_only"] = std::move(only);
    diffs.push_back(std::move(jd));
  }
  j["diffs"] = std::move(diffs);
  return j.dump(2) + "\n";
}

ImpactModel load_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("not valid JSON (") + e.what() + ")");
  }
  if (get<std::string>(j, "format") != kModelFormat)
    bad("unsupported format '" + get<std::string>(j, "format") + "'");

  ImpactModel m;
  m.software = get<std::string>(j, "software");
  m.target = get<std::string>(j, "target");
  m.related = get<std::vector<std::string>>(j, "related");
  m.threshold_percent = get<double>(j, "threshold_percent");
  m.exhausted = get<bool>(j, "exhausted");

  for (const auto& jv : field(j, "variables")) {
    ModelVariable v;
    v.name = get<std::string>(jv, "name");
    v.kind = kind_from(get<std::string>(jv, "kind"));
    v.domain = domain_from(field(jv, "domain"));
    if (!field(jv, "default").is_null()) {
      auto parsed = v.domain.parse_value(get<std::string>(jv, "default"));
      if (!parsed) bad("default of '" + v.name + "' is outside its domain");
      v.default_value = *parsed;
    }
    v.symbolic = get<bool>(jv, "symbolic");
    if (!field(jv, "fixed").is_null()) {
      auto parsed = v.domain.parse_value(get<std::string>(jv, "fixed"));
      if (!parsed) bad("fixed value of '" + v.name + "' is outside its domain");
      v.fixed_value = *parsed;
    }
    m.variables.push_back(std::move(v));
  }

  for (const auto& jr : field(j, "rows")) {
    CostTableRow r;
    r.state_id = get<int>(jr, "state");
    r.status = get<std::string>(jr, "status");
    r.config_constraint = get<std::vector<std::string>>(jr, "constraint");
    r.input_predicate = get<std::vector<std::string>>(jr, "input_predicate");
    r.internal = get<std::vector<std::string>>(jr, "internal");
    r.mixed = get<bool>(jr, "mixed");
    r.cost = cost_from(field(jr, "cost"));
    r.trace = get<std::string>(jr, "trace");
    m.rows.push_back(std::move(r));
  }

  for (const auto& jp : field(j, "pairs")) {
    SuspiciousPair p;
    p.slow = get<int>(jp, "slow");
    p.fast = get<int>(jp, "fast");
    p.metric = metric_from(get<std::string>(jp, "metric"));
    const auto& ratio = field(jp, "ratio");
    if (ratio.is_string() && ratio.get<std::string>() == "inf")
      p.ratio = std::numeric_limits<double>::infinity();
    else
      p.ratio = get<double>(jp, "ratio");
    p.similarity = get<int>(jp, "similarity");
    if (!m.row(p.slow) || !m.row(p.fast)) bad("pair references a missing row");
    m.pairs.push_back(p);
  }

  for (const auto& jd : field(j, "diffs")) {
    DiffCriticalPath d;
    d.slow_state = get<int>(jd, "slow");
    d.fast_state = get<int>(jd, "fast");
    d.lcs_length = get<std::size_t>(jd, "lcs_length");
    if (!field(jd, "critical_cid").is_null()) d.critical_cid = get<int>(jd, "critical_cid");
    d.critical_latency = get<std::int64_t>(jd, "critical_latency");
    d.critical_chain = get<std::vector<std::string>>(jd, "critical_chain");
    for (const auto& e : field(jd, "common")) d.common.push_back(entry_from(e));
    for (const auto& e : field(jd, "slow_only")) d.slow_only.push_back(entry_from(e));
    m.diffs.emplace(std::make_pair(d.slow_state, d.fast_state), std::move(d));
  }

  // Atoms must parse against the model's own variables.
  auto table = m.table();
  try {
    for (const auto& r : m.rows) {
      for (const auto& a : r.config_constraint) symexec::parse_atom(a, table);
      for (const auto& a : r.input_predicate) symexec::parse_atom(a, table);
      for (const auto& a : r.internal) symexec::parse_atom(a, table);
    }
  } catch (const Error& e) {
    bad(std::string("bad constraint atom: ") + e.what());
  }
  return m;
}

// ---------------------------------------------------------------------------
// Report

namespace {

std::string cost_summary(const trace::CostVector& c) {
  std::string out = std::to_string(c.latency());
  for (auto m : trace::kAllMetrics) {
    if (m == trace::Metric::Latency || m == trace::Metric::Instructions || c[m] == 0) continue;
    out += " " + std::string(trace::to_string(m)) + "=" + std::to_string(c[m]);
  }
  return out;
}

std::string percent(double ratio) {
  if (std::isinf(ratio)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f%%", ratio * 100);
  return buf;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

}  // namespace

std::string render_report(const ImpactModel& m) {
  std::ostringstream os;
  os << "software: " << m.software << "\n";
  os << "target: " << (m.target.empty() ? "(none)" : m.target) << "\n";
  os << "related:";
  for (const auto& r : m.related) os << " " << r;
  os << "\nthreshold: " << m.threshold_percent << "%\n";
  if (m.exhausted) os << "note: exploration hit a budget; the table is partial\n";

  // Rows sharing constraint, predicate and cost are listed once.
  struct Group {
    std::string constraint, predicate;
    trace::CostVector cost;
    std::vector<int> states;
  };
  std::vector<Group> groups;
  for (const auto& r : m.rows) {
    auto c = join_atoms(r.config_constraint);
    if (!r.internal.empty()) c += " [" + join_atoms(r.internal) + "]";
    auto p = join_atoms(r.input_predicate);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.constraint == c && g.predicate == p && g.cost == r.cost;
    });
    if (it == groups.end())
      groups.push_back({c, p, r.cost, {r.state_id}});
    else
      it->states.push_back(r.state_id);
  }
  std::size_t wc = std::string("Configuration Constraint").size();
  std::size_t wk = std::string("Cost").size();
  for (const auto& g : groups) {
    wc = std::max(wc, g.constraint.size());
    wk = std::max(wk, cost_summary(g.cost).size());
  }
  os << "\n" << pad("Configuration Constraint", wc) << "  " << pad("Cost", wk)
     << "  Workload Predicate  States\n";
  for (const auto& g : groups) {
    os << pad(g.constraint, wc) << "  " << pad(cost_summary(g.cost), wk) << "  "
       << pad(g.predicate, 18) << "  ";
    for (std::size_t i = 0; i < g.states.size(); ++i) os << (i ? "," : "") << g.states[i];
    os << "\n";
  }

  // One line per (slow, fast) with every flagged metric.
  std::vector<std::pair<int, int>> order;
  std::map<std::pair<int, int>, std::vector<const SuspiciousPair*>> by_rows;
  for (const auto& p : m.pairs) {
    auto& v = by_rows[{p.slow, p.fast}];
    if (v.empty()) order.emplace_back(p.slow, p.fast);
    v.push_back(&p);
  }
  os << "\nsuspicious pairs: " << order.size() << " (" << m.pairs.size() << " metric flags)\n";
  for (const auto& key : order) {
    const auto& flags = by_rows[key];
    const auto* s = m.row(key.first);
    const auto* f = m.row(key.second);
    os << "  slow " << key.first << " [" << join_atoms(s->config_constraint) << "] vs fast "
       << key.second << " [" << join_atoms(f->config_constraint) << "] similarity "
       << flags.front()->similarity << ":";
    for (const auto* p : flags)
      os << " " << trace::to_string(p->metric) << " " << s->cost[p->metric] << "/"
         << f->cost[p->metric] << " (+" << percent(p->ratio) << ")";
    auto it = m.diffs.find(key);
    if (it != m.diffs.end() && !it->second.critical_chain.empty()) {
      os << " critical: ";
      for (std::size_t i = 0; i < it->second.critical_chain.size(); ++i)
        os << (i ? "->" : "") << it->second.critical_chain[i];
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace violet::impact
