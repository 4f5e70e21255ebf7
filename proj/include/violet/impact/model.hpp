#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "violet/confscript/ast.hpp"
#include "violet/impact/cost_table.hpp"
#include "violet/impact/diff.hpp"
#include "violet/symexec/engine.hpp"
#include "violet/trace/state_trace.hpp"

namespace violet::impact {

inline constexpr const char* kModelFormat = "violet-model v1";

struct ModelVariable {
  std::string name;
  symexec::VarKind kind = symexec::VarKind::Config;
  confscript::Domain domain;
  /// Configs only.
  std::optional<std::int64_t> default_value;
  bool symbolic = false;
  /// Value a non-symbolic config or input held throughout exploration.
  std::optional<std::int64_t> fixed_value;
  friend bool operator==(const ModelVariable&, const ModelVariable&) = default;
};

struct ImpactModel {
  std::string software;
  std::string target;
  std::vector<std::string> related;
  double threshold_percent = 100;
  std::vector<ModelVariable> variables;
  std::vector<CostTableRow> rows;
  std::vector<SuspiciousPair> pairs;
  /// Keyed by (slow state, fast state).
  std::map<std::pair<int, int>, DiffCriticalPath> diffs;
  bool exhausted = false;

  const CostTableRow* row(int state_id) const;
  const ModelVariable* variable(const std::string& name) const;
  /// Table over every model variable, in model order (configs, inputs,
  /// internal), for parsing and solving atoms.
  symexec::VariableTable table() const;

  friend bool operator==(const ImpactModel&, const ImpactModel&) = default;
};

struct ModelInputs {
  std::string software;
  std::string target;
  std::set<std::string> related;
  double threshold_percent = 100;
};

/// Cost table, suspicious pairs and a differential critical path for every
/// flagged (slow, fast) orientation.
ImpactModel build_model(const confscript::Program& program,
                        const symexec::ExplorationResult& exploration,
                        const std::vector<trace::StateTrace>& traces, const ModelInputs& in);

/// Stable, pretty-printed JSON text.
std::string serialize_model(const ImpactModel& model);
/// Throws ModelFormatError.
ImpactModel load_model(const std::string& text);

/// Human-readable cost table (constraint, cost, workload predicate) with the
/// suspicious pairs and their critical paths.
std::string render_report(const ImpactModel& model);

}  // namespace violet::impact
