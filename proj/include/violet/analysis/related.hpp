#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "violet/analysis/control_dep.hpp"
#include "violet/confscript/ast.hpp"

namespace violet::analysis {

struct CallEdge {
  std::string caller;
  std::string callee;
  int callsite = -1;  // statement id in caller
  friend bool operator==(const CallEdge&, const CallEdge&) = default;
};

/// Static call graph; builtins (trace_on/trace_off) are not nodes.
class CallGraph {
 public:
  explicit CallGraph(const confscript::Program& program);

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<CallEdge>& edges() const { return edges_; }
  std::vector<CallEdge> calls_from(const std::string& caller) const;

  /// Every call chain (edge sequence) from the entry function to `target`
  /// without repeating a function, at most `max_depth` calls long. The entry
  /// itself yields one empty chain.
  std::vector<std::vector<CallEdge>> paths_to(const std::string& target,
                                              std::size_t max_depth = 32) const;

 private:
  std::string entry_;
  std::vector<std::string> nodes_;
  std::vector<CallEdge> edges_;
};

struct UsagePoint {
  std::string param;
  std::string func;
  int instruction = -1;
  /// Reached through a local or getter carrying the config (one hop).
  bool via_dataflow = false;
  friend auto operator<=>(const UsagePoint&, const UsagePoint&) = default;
};

struct RelatedSet {
  std::string target;
  std::set<std::string> enablers;
  std::set<std::string> influenced;
  std::set<std::string> related() const;
  friend bool operator==(const RelatedSet&, const RelatedSet&) = default;
};

/// Static configuration analysis over one program: usage points, call
/// chains, control dependence and the enabler/influenced relation.
class ConfigAnalysis {
 public:
  explicit ConfigAnalysis(const confscript::Program& program);

  /// Usage points of config `p`, including one-hop data flow through a local
  /// assigned from the config (directly, via a pure extern, or via a getter).
  std::vector<UsagePoint> usages(const std::string& p) const;
  std::vector<UsagePoint> usages_in(const std::string& func) const;

  /// Enabler parameters: configs whose branch controls a call site on the
  /// way to a usage of `p` (or the usage itself). Throws UnknownConfig.
  std::set<std::string> enablers(const std::string& p) const;

  std::map<std::string, RelatedSet> related() const;

  const CallGraph& call_graph() const { return cg_; }
  const ControlDependence& dependence(const std::string& func) const;

 private:
  const confscript::Program& prog_;
  CallGraph cg_;
  std::map<std::string, std::unique_ptr<ControlDependence>> deps_;
  std::map<std::string, std::vector<UsagePoint>> usages_by_func_;

  void collect_usages();
};

std::set<std::string> get_enabler_configs(const confscript::Program& program, const std::string& p);
std::map<std::string, RelatedSet> get_related_configs(const confscript::Program& program);

/// `target<TAB>enabler:a,b<TAB>influenced:c`, one line per config in
/// declaration order.
std::string format_related_report(const confscript::Program& program,
                                  const std::map<std::string, RelatedSet>& related);
/// Inverse of format_related_report; throws Error on malformed lines.
std::map<std::string, RelatedSet> parse_related_report(const std::string& text);

}  // namespace violet::analysis
